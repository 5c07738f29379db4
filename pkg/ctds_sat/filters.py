# The following source code was originally obtained from:
# https://github.com/rootpy/rootpy/blob/master/rootpy/tree/filtering.py
# ==============================================================================

# Copyright (c) 2012-2017, The rootpy developers
# All rights reserved.
#
# Please refer to LICENSE.rootpy for the license terms.
# ==============================================================================
"""This module defines a framework for filtering generated instances."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from .defaults import DPLL_BUDGET, SatError, log
from .dpll import BUDGET_EXCEEDED, SAT, UNSAT, dpll_solve

UNKNOWN = 'Unknown'


class OracleBudgetExhausted(SatError):
    """
    DPLL could not decide an instance within its decision budget. The
    instance is kept with ``sat_oracle = 'Unknown'``; this is logged, not raised
    out of a batch.
    """
    pass


class Filter(object):
    """
    The base class from which all filter classes must inherit from.
    The number of passing and failing instances are recorded and may be used
    later to create a cut-flow.
    """
    def __init__(self, passthrough=False):
        self.total = 0
        self.passing = 0
        self.passthrough = passthrough
        if self.passthrough:
            log.debug(
                "Filter {0} will run in pass-through mode".format(
                    self.__class__.__name__))
        else:
            log.debug(
                "Filter {0} is activated".format(
                    self.__class__.__name__))

    def passed(self, instance):
        self.total += 1
        self.passing += 1

    def failed(self, instance):
        self.total += 1

    @property
    def failing(self):
        return self.total - self.passing


class InstanceFilter(Filter):
    """
    In pass-through mode ``passes`` still runs (its side results are kept)
    but every instance is accepted.
    """
    def __call__(self, instance):
        _passes = self.passes(instance)
        if _passes is None:
            # instance is not counted in total
            log.warning(
                "Filter {0} returned None so the instance will not "
                "contribute to cut-flow. Use True to accept it, "
                "otherwise False.".format(self.__class__.__name__))
            return False
        elif _passes or self.passthrough:
            self.passed(instance)
            return True
        self.failed(instance)
        return False

    def passes(self, instance):
        """
        You should override this method in your derived class
        """
        return True

    def finalize(self):
        """
        You should override this method in your derived class
        """
        pass


class SatOracleFilter(InstanceFilter):
    """
    Reject instances the DPLL oracle proves unsatisfiable. Undecided instances
    pass with verdict ``'Unknown'``.

    After each call ``verdict`` holds ``'Sat'``, ``'Unsat'`` or ``'Unknown'``
    for the instance just seen.
    """
    def __init__(self, decision_budget=DPLL_BUDGET, passthrough=False):
        super(SatOracleFilter, self).__init__(passthrough=passthrough)
        self.decision_budget = decision_budget
        self.verdict = None
        self.unknown = 0

    def passes(self, formula):
        result = dpll_solve(formula, self.decision_budget)
        if result.status == SAT:
            self.verdict = SAT
            return True
        if result.status == UNSAT:
            self.verdict = UNSAT
            return False
        assert result.status == BUDGET_EXCEEDED
        self.verdict = UNKNOWN
        self.unknown += 1
        log.warning(str(OracleBudgetExhausted(
            "DPLL undecided after {0:d} decisions on {1!r}; kept as {2}".format(
                result.decisions, formula, UNKNOWN))))
        return True

    def finalize(self):
        log.info(
            "{0}: {1:d} seen, {2:d} passed, {3:d} rejected as Unsat, "
            "{4:d} undecided".format(
                self.__class__.__name__, self.total, self.passing, self.failing,
                self.unknown))
