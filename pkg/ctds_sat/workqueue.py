"""This module provides WorkQueue, an ordered map over a worker pool."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import multiprocessing
import time

from .logger import get_logger

log = get_logger('ctds_sat.workqueue')

# Set in each worker by the pool initializer
_context = None


def _init_worker(context):
    global _context
    _context = context


def _call(args):
    func, item = args
    return func(_context, item)


class WorkQueue(object):
    """
    Apply ``func(context, item)`` to every item and yield the results in input
    order, whatever order the workers finish in.

    Parameters
    ----------
    context : object
        Shared read-only data, sent once to each worker.

    threads : int, optional (default=1)
        Number of worker processes; 1 runs inline.

    name : str, optional
        Used in progress messages.

    report_every : float, optional (default=60)
        Seconds between progress messages.
    """
    def __init__(self, context, threads=1, name='items', report_every=60):
        if threads < 1:
            raise ValueError("threads must be at least 1, got {0!r}".format(threads))
        self._context = context
        self._threads = int(threads)
        self._name = name
        self._report_every = report_every

    def map(self, func, items):
        items = list(items)
        total = len(items)
        if not total:
            return
        t1 = time.time()
        t2 = t1
        done = 0
        if self._threads == 1:
            _init_worker(self._context)
            results = (func(self._context, item) for item in items)
            pool = None
        else:
            pool = multiprocessing.Pool(
                min(self._threads, total), initializer=_init_worker,
                initargs=(self._context,))
            results = pool.imap(_call, [(func, item) for item in items])
        try:
            for result in results:
                done += 1
                yield result
                if time.time() - t2 > self._report_every:
                    t2 = time.time()
                    rate = done / (t2 - t1)
                    log.info(
                        "{0:.1f} {1} per second. "
                        "{2:.0f}% done.".format(rate, self._name, 100 * done / total))
        finally:
            if pool is not None:
                pool.close()
                pool.join()
        elapsed = time.time() - t1
        if elapsed > 0:
            log.info("{0:d} {1} at {2:.1f} per second".format(
                total, self._name, total / elapsed))
