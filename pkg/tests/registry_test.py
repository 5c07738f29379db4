"""Testing the ensemble registry."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import pytest

from ctds_sat.generators import KSatEnsemble
from ctds_sat.registry import (
    REGISTRY, UnknownEnsemble, create, lookup_by_name, names, register)


def test_lookup():
    assert lookup_by_name('ksat') is KSatEnsemble
    assert lookup_by_name('KSatEnsemble') is KSatEnsemble
    assert lookup_by_name('nosuch') is None
    assert isinstance(create('ksat'), KSatEnsemble)
    with pytest.raises(UnknownEnsemble):
        create('nosuch')


def test_register():
    @register('toy')
    class ToyEnsemble(object):
        pass

    try:
        assert create('toy').__class__ is ToyEnsemble
        assert 'toy' in names()
        assert 'ToyEnsemble' not in names()
    finally:
        REGISTRY.pop('toy')
        REGISTRY.pop('ToyEnsemble')
