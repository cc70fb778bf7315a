"""
Bookkeeping for randomized law checks: one outcome per law, holding the
first counterexample found.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

log = logging.getLogger(__name__)


@dataclass
class LawOutcome:
    passed: bool = True
    trial: Optional[int] = None
    counterexample: Optional[tuple] = None


@dataclass
class LawReport:
    laws: Dict[str, LawOutcome] = field(default_factory=dict)
    trials: int = 0
    # law name -> trials in which its hypotheses held
    qualifying: Dict[str, int] = field(default_factory=dict)

    @classmethod
    def for_laws(cls, names, trials):
        return cls({name: LawOutcome() for name in names}, trials)

    @property
    def passed(self):
        return all(outcome.passed for outcome in self.laws.values())

    def failures(self):
        return [name for name, outcome in self.laws.items() if not outcome.passed]

    def record(self, name, ok, trial, operands):
        outcome = self.laws.setdefault(name, LawOutcome())
        if ok or not outcome.passed:
            return
        log.warning('law %s failed in trial %d', name, trial)
        outcome.passed = False
        outcome.trial = trial
        outcome.counterexample = tuple(operands)


def trial_generators(seed, trials):
    """One independent numpy generator per trial, split off a single seed."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [np.random.default_rng(child) for child in children]


def trial_stream(seed):
    """
    Unbounded version of trial_generators: the first k generators are the
    ones trial_generators(seed, k) returns.
    """
    sequence = np.random.SeedSequence(seed)
    while True:
        yield np.random.default_rng(sequence.spawn(1)[0])
