# This file makes the schemas directory a package
