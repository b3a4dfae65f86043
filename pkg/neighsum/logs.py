import os
import sys
import traceback

DEBUG = os.getenv("DEBUG") == "1"

g_verbose = os.getenv("VERBOSE", "").lower() in ("1", "true")
g_logprefix = ""


def set_verbose(verbose: bool, logprefix: str = ""):
    global g_verbose, g_logprefix
    g_verbose = verbose or g_verbose
    if logprefix:
        g_logprefix = logprefix


def is_verbose() -> bool:
    return g_verbose


# stdout carries JSON/CSV results, so every diagnostic goes to stderr
def _log(message):
    if g_verbose:
        print(f"{g_logprefix}{message}", file=sys.stderr, flush=True)


def _dbg(message):
    if DEBUG:
        print(f"DEBUG: {message}", file=sys.stderr, flush=True)


def _err(message, e):
    print(f"ERROR: {message}: {e}", file=sys.stderr, flush=True)
    if g_verbose:
        print(traceback.format_exc(), file=sys.stderr, flush=True)
