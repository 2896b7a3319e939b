"""Well-structured transition systems on broadcast protocols: ordinal
hierarchies, controlled bad sequences, backward coverability, termination,
and a Hardy-computing lower-bound gadget."""

from .budget import Budget, BudgetExceeded, LimitExceeded, Limits, ResourceExceeded
from .ordinal import ControlFn, Ordinal, cichon_eval, hardy_eval, parse_ordinal
from .order import Configuration, ControlSpec, leq_config, parse_config
from .protocol import Op, Protocol, Rule, fig1, post, successors
from .verify import check_termination, cover, min_ppre, min_ppre_star

__all__ = [
    "Budget", "BudgetExceeded", "LimitExceeded", "Limits", "ResourceExceeded",
    "ControlFn", "Ordinal", "cichon_eval", "hardy_eval", "parse_ordinal",
    "Configuration", "ControlSpec", "leq_config", "parse_config",
    "Op", "Protocol", "Rule", "fig1", "post", "successors",
    "check_termination", "cover", "min_ppre", "min_ppre_star",
]
