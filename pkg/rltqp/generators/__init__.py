# This file makes the generators directory a package
