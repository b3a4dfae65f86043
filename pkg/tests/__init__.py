# Tests for the neighsum package
