# This file makes the io directory a package
