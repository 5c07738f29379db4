# The following source code was originally obtained from:
# https://github.com/rootpy/rootpy/blob/master/rootpy/logger/__init__.py
# https://github.com/rootpy/rootpy/blob/master/rootpy/logger/formatter.py
# ==============================================================================

# Copyright (c) 2012-2017, The rootpy developers
# All rights reserved.
#
# Please refer to LICENSE.rootpy for the license terms.
# ==============================================================================
"""This module provides the package logger.

Records are rendered as ``[LEVEL:name] message``, with the level coloured when
the handler writes to a terminal. Set ``CTDS_SAT_DEBUG`` for DEBUG output.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import logging
import os

BLACK, RED, GREEN, YELLOW, BLUE, MAGENTA, CYAN, WHITE = range(8)

LEVEL_COLORS = {
    'DEBUG': BLUE,
    'INFO': GREEN,
    'WARNING': YELLOW,
    'ERROR': RED,
    'CRITICAL': RED,
}

RESET_SEQ = '\033[0m'
COLOR_SEQ = '\033[1;{0:d}m'
BOLD_SEQ = '\033[1m'
FORMAT = '[{color}{levelname}$RESET:$BOLD{name}$RESET] {message}'

DEBUG_ENV = 'CTDS_SAT_DEBUG'


def expand_markup(fmt, use_color=False):
    """Resolve the $RESET and $BOLD markers of ``fmt``."""
    if use_color:
        return fmt.replace('$RESET', RESET_SEQ).replace('$BOLD', BOLD_SEQ)
    return fmt.replace('$RESET', '').replace('$BOLD', '')


class LevelFormatter(logging.Formatter):
    """
    ``str.format`` style formatter with an optional coloured level name.
    """
    def __init__(self, use_color=False, fmt=FORMAT):
        super(LevelFormatter, self).__init__(
            fmt=expand_markup(fmt, use_color), style='{')
        self.use_color = use_color

    def level_color(self, levelname):
        if self.use_color and levelname in LEVEL_COLORS:
            # foreground colors start at 30
            return COLOR_SEQ.format(30 + LEVEL_COLORS[levelname])
        return ''

    def format(self, record):
        fields = dict(record.__dict__)
        fields['message'] = record.getMessage()
        fields['color'] = self.level_color(record.levelname)
        text = self._fmt.format(**fields)
        if record.exc_info:
            text += '\n' + self.formatException(record.exc_info)
        return text


def install_handler(root=None):
    """
    Give the root logger a stream handler unless it already has one.
    Returns the installed handler, or None.
    """
    root = root if root is not None else logging.getLogger()
    if root.handlers:
        return None
    handler = logging.StreamHandler()
    handler.setLevel(logging.DEBUG)
    isatty = getattr(handler.stream, 'isatty', None)
    handler.setFormatter(LevelFormatter(use_color=bool(isatty and isatty())))
    root.addHandler(handler)
    # what reaches the screen is decided per logger by get_logger
    root.setLevel(logging.DEBUG)
    return handler


install_handler()


def get_logger(name='ctds_sat'):
    log = logging.getLogger(name)
    if os.environ.get(DEBUG_ENV, False):
        log.setLevel(logging.DEBUG)
    else:
        log.setLevel(logging.INFO)
    return log


log = get_logger('ctds_sat')
