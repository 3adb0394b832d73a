"""Linear substitution calculus and its hypergraph proof nets."""

from .terms import (
    Abs, App, ESub, Hole, Var, alpha_eq, free_vars, parse, plug, pretty, well_name,
)
from .rewriting import find_term_redexes, normalize, step
from .nets import Link, LinkKind, Net, net_iso, plug_net, validate
from .translation import translate
from .correctness import correction_net, is_correct
from .readback import read_back, read_back_all
from .netrewriting import find_net_redexes, net_step, normalize_net
from .equivalence import equiv_oracle, equiv_via_nets

__all__ = [
    "Abs", "App", "ESub", "Hole", "Var", "alpha_eq", "free_vars", "parse", "plug", "pretty",
    "well_name", "find_term_redexes", "normalize", "step", "Link", "LinkKind", "Net",
    "net_iso", "plug_net", "validate", "translate", "correction_net", "is_correct",
    "read_back", "read_back_all", "find_net_redexes", "net_step", "normalize_net",
    "equiv_oracle", "equiv_via_nets",
]

__version__ = "0.1.0"
