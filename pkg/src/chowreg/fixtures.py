"""Built-in cycles, shipped as cycle-definition text and parsed on demand."""

from __future__ import annotations

from .errors import ChowregError
from .parser import parse_cycle_file

FIXTURES = {
    "z1_totaro": """\
field cyclotomic(1)
cycle z1_totaro n=3 p=2
component mult=1 1-1/t ; 1-t ; 1/t
""",
    "petras_zeta5": """\
field cyclotomic(5)
cycle petras_zeta5 n=3 p=2
component mult=1 1-1/t ; 1-t ; 1/t
component mult=1 1-zeta/t ; 1-t ; 1/t^5
component mult=1 1-zeta^4/t ; 1-t ; 1/t^5
""",
    "mccarthy_counterexample": """\
field cyclotomic(4)
cycle mccarthy_counterexample n=3 p=2
component mult=1 i*t-1 ; -((1+t)*(1+3*t))/((1+i*t)*(1-2*t)) ; (i*t-1)/(3+t)
""",
    "graph_4_2": """\
field cyclotomic(1)
cycle graph_4_2 n=2 p=1
component mult=1 t ; (t-4)/(t-2)
""",
    "z_minus1": """\
field cyclotomic(1)
cycle z_minus1 n=3 p=2
component mult=1 1+1/t ; 1-t ; 1/t
""",
}


def fixture_names():
    return sorted(FIXTURES)


def load_fixture(name):
    """The named built-in cycle as a Precycle."""
    if name not in FIXTURES:
        raise ChowregError(
            f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    return parse_cycle_file(FIXTURES[name])[0]
