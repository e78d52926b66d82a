# This file makes the relaxation directory a package
