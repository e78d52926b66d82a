# This file makes the special directory a package
