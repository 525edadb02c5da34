# Poly-Z groups: collection, automorphisms, isomorphism witnesses
import sys

# Exponents are unbounded, so int <-> str conversion must be too
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)
