"""Run the structure-identity battery on every built-in problem."""

from varinverse.catalog import builtin, builtin_names
from varinverse.identities import run_identities

for name in builtin_names():
    P = builtin(name)
    print(run_identities(P.spray, P.samples()).to_text(), "\n")
