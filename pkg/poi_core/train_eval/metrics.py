from collections import OrderedDict

import numpy as np

from poi_core import config
from poi_core.nn.exceptions import IndexOutOfRange
from poi_core.nn.tensor import Tensor
from poi_core.train_eval.exceptions import EmptyRanks


def rank_of_target(scores, target):
    """
    1-based rank of the target. Higher scores rank first; an equal score ahead of the target (lower index)
    counts against it.
    """
    if isinstance(scores, Tensor):
        scores = scores.data
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    if not 0 <= target < scores.size:
        raise IndexOutOfRange('Target %s outside of [0, %s)' % (target, scores.size))
    score = scores[target]
    return 1 + int(np.count_nonzero(scores > score)) + int(np.count_nonzero(scores[:target] == score))


def check_ranks(ranks):
    if not len(ranks):
        raise EmptyRanks()
    ranks = np.asarray(ranks, dtype=np.int64)
    if ranks.min() < 1:
        raise ValueError('Ranks are 1-based, got %s' % ranks.min())
    return ranks


def acc_at_k(ranks, k):
    ranks = check_ranks(ranks)
    return float(np.count_nonzero(ranks <= k)) / ranks.size


def mrr(ranks):
    ranks = check_ranks(ranks)
    return float(np.sum(1.0 / ranks)) / ranks.size


class MetricsReport(object):

    def __init__(self, acc_at, mrr, n_samples, alpha=None, beta=None):
        self.acc_at = acc_at
        self.mrr = mrr
        self.n_samples = n_samples
        self.alpha = alpha
        self.beta = beta

    @classmethod
    def from_ranks(cls, ranks, k_list=None, alpha=None, beta=None):
        k_list = k_list or config.K_LIST
        return cls(OrderedDict((k, acc_at_k(ranks, k)) for k in sorted(k_list)), mrr(ranks), len(ranks),
                   alpha, beta)

    def as_dict(self):
        return {
            'acc_at': {str(k): value for k, value in self.acc_at.items()},
            'mrr': self.mrr,
            'n_samples': self.n_samples,
            'alpha': self.alpha,
            'beta': self.beta,
        }

    def __repr__(self):
        return 'MetricsReport(%s)' % ', '.join(
            ['acc@%s=%.4f' % (k, value) for k, value in self.acc_at.items()] + ['mrr=%.4f' % self.mrr,
                                                                                 'n=%s' % self.n_samples])
