# This makes the tests directory a Python package
