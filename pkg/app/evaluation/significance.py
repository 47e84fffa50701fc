"""
Paired t-test over per-user metric vectors.
"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy.special import betainc

logger = logging.getLogger(__name__)

SIGNIFICANCE_LEVEL = 0.01

TTestResult = namedtuple('TTestResult', ['t', 'p', 'df', 'n'])


def student_t_two_sided(t, df):
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def paired_t_test(metric_a, metric_b):
    """Two-sided paired t-test of ``metric_a`` against ``metric_b``.

    When every difference is equal the statistic is undefined: the
    result is t = 0, p = 1 for all-zero differences and t = +-inf, p = 0
    otherwise.
    """
    a = np.asarray(metric_a, dtype=np.float64)
    b = np.asarray(metric_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError('Metric vectors must be aligned on the same users')
    n = len(a)
    if n < 2:
        raise ValueError('A paired t-test needs at least two users')
    diff = a - b
    df = n - 1
    mean = float(diff.mean())
    sd = float(diff.std(ddof=1))
    if sd == 0.0:
        logger.warning('Zero-variance differences over %d users', n)
        if mean == 0.0:
            return TTestResult(0.0, 1.0, df, n)
        return TTestResult(math.copysign(math.inf, mean), 0.0, df, n)
    t = mean / (sd / math.sqrt(n))
    return TTestResult(t, student_t_two_sided(t, df), df, n)


def is_significant(result, level=SIGNIFICANCE_LEVEL):
    return result.p < level
