"""Recover Lagrangians from passing forms, then test metrizability.

For a k-homogeneous theta the potential is L = i_S theta / k.  The projective
test recovers a 1-homogeneous F, the Finsler test a 2-homogeneous energy, and
on the flat spray the Hamel condition turns a 0-homogeneous f into F = S(f).
"""

from varinverse.catalog import builtin
from varinverse.helmholtz import (
    finsler_metrizability_check,
    hamel_check,
    potential,
    projective_metrizability_check,
)

hp = builtin("poincare-halfplane")
s = hp.samples()
print("half-plane energy potential:", potential(hp.spray, hp.candidate("energy").theta(2), 2, s))
print(finsler_metrizability_check(hp.spray, hp.candidate("energy").theta(2), s).to_text(), "\n")
print(projective_metrizability_check(hp.spray, hp.candidate("norm").theta(2), s).to_text(), "\n")

flat = builtin("flat2d")
fs = flat.samples()
print(projective_metrizability_check(flat.spray, flat.candidate("asym-norm").theta(2), fs).to_text(), "\n")
print(hamel_check(flat.spray, flat.candidate("hamel").scalar, fs).to_text())
