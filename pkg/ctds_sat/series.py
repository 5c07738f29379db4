# The following source code was originally obtained from:
# https://github.com/rootpy/rootpy/blob/master/rootpy/tree/treebuffer.py
# ==============================================================================

# Copyright (c) 2012-2017, The rootpy developers
# All rights reserved.
#
# Please refer to LICENSE.rootpy for the license terms.
# ==============================================================================
"""This module provides TimeSeries."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import re
from collections import OrderedDict

import numpy as np
import six


class TimeSeries(OrderedDict):
    """
    A dictionary mapping column names to aligned 1-d arrays. Columns are also
    attributes; names that are not identifiers are fixed by replacing invalid
    characters with '_'.
    """
    def __init__(self, columns=None, summary=None):
        super(TimeSeries, self).__init__()
        self._fixed_names = {}
        self.summary = OrderedDict(summary or ())
        if columns is not None:
            for name, values in (six.iteritems(columns)
                                 if isinstance(columns, dict) else columns):
                self[name] = values
        self._inited = True  # affects __setattr__ and __getattr__ behaviors

    def _fix_name(self, name):
        # Replace invalid characters with '_'
        name = re.sub('[^0-9a-zA-Z_]', '_', name)
        # Remove leading characters until we find a letter or underscore
        return re.sub('^[^a-zA-Z_]+', '', name)

    def __len__(self):
        """Number of rows"""
        for values in six.itervalues(self):
            return len(values)
        return 0

    @property
    def columns(self):
        return list(self.keys())

    def __setitem__(self, name, value):
        # for a key to be used as an attr it must be a valid Python identifier
        fixed_name = self._fix_name(name)
        if fixed_name in dir(self) or fixed_name.startswith('_'):
            raise ValueError("illegal column name: `{0}`".format(name))
        value = np.asarray(value)
        if value.ndim != 1:
            raise ValueError("column `{0}` is not one-dimensional".format(name))
        for other_name, other in six.iteritems(self):
            if len(other) != len(value):
                raise ValueError(
                    "column `{0}` has {1:d} rows, `{2}` has {3:d}".format(
                        name, len(value), other_name, len(other)))
            break
        if fixed_name != name:
            self._fixed_names[fixed_name] = name
        super(TimeSeries, self).__setitem__(name, value)

    def __setattr__(self, attr, value):
        # this test allows attributes to be set in the __init__ method
        # any normal attributes are handled normally
        if '_inited' not in self.__dict__ or attr in self.__dict__:
            super(TimeSeries, self).__setattr__(attr, value)
            return
        raise AttributeError(
            "cannot set attribute `{0}` of `{1}` instance; assign a column "
            "with [] instead".format(attr, self.__class__.__name__))

    def __getattr__(self, attr):
        if '_inited' not in self.__dict__:
            raise AttributeError(
                "`{0}` instance has no attribute `{1}`".format(
                    self.__class__.__name__, attr))
        if attr in self._fixed_names:
            attr = self._fixed_names[attr]
        try:
            return super(TimeSeries, self).__getitem__(attr)
        except KeyError:
            raise AttributeError(
                "`{0}` instance has no attribute `{1}`".format(
                    self.__class__.__name__, attr))

    def __str__(self):
        return self.__repr__()

    def __repr__(self):
        rep = ''
        for name, value in six.iteritems(self):
            rep += '{0} -> {1}\n'.format(name, repr(value))
        return rep
