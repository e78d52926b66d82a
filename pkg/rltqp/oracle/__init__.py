# This file makes the oracle directory a package
