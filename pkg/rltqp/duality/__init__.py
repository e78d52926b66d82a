# This file makes the duality directory a package
