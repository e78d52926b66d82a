# This file makes the core directory a package
