# This file makes the rltqp directory a package
