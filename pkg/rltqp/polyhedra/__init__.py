# This file makes the polyhedra directory a package
