"""Testing WorkQueue."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import pytest

from ctds_sat.workqueue import WorkQueue


def scaled(context, item):
    return context * item


def test_inline():
    queue = WorkQueue(3)
    assert list(queue.map(scaled, range(5))) == [0, 3, 6, 9, 12]
    assert list(queue.map(scaled, [])) == []


def test_pool_keeps_order():
    queue = WorkQueue(2, threads=3, name='numbers')
    assert list(queue.map(scaled, range(50))) == [2 * i for i in range(50)]


def test_threads():
    with pytest.raises(ValueError):
        WorkQueue(None, threads=0)
