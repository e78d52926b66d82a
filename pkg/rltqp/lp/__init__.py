# This file makes the lp directory a package
