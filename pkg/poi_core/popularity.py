import math

from collections import OrderedDict, namedtuple
from datetime import timedelta

from django.utils.translation import gettext_lazy as _

from poi_core import config
from poi_core.exceptions import DataError, DomainError


PopularityCounts = namedtuple('PopularityCounts', ('c_user_recent', 'c_checkin_recent', 'c_user_past',
                                                   'c_checkin_past'))


class UnknownPoi(DataError):
    message = _('POI has no check-in in the train split')

    def __init__(self, poi):
        self.poi = poi
        super(UnknownPoi, self).__init__('%s: %s' % (self.message, poi))


def validate_weight(name, value):
    if not 0.0 <= value <= 1.0:
        raise DomainError(_('%(name)s must be in [0, 1], got %(value)s') % {'name': name, 'value': value})


class PopularityParams(object):

    def __init__(self, alpha=None, beta=None, recency_window=None, reference_time=None):
        self.alpha = config.POPULARITY_ALPHA if alpha is None else alpha
        self.beta = config.POPULARITY_BETA if beta is None else beta
        if recency_window is None:
            recency_window = timedelta(days=config.RECENCY_WINDOW_DAYS)
        elif not isinstance(recency_window, timedelta):
            recency_window = timedelta(days=recency_window)
        self.recency_window = recency_window
        self.reference_time = reference_time
        validate_weight('alpha', self.alpha)
        validate_weight('beta', self.beta)
        if self.recency_window <= timedelta(0):
            raise DomainError(_('Recency window must be positive'))

    def with_reference_time(self, reference_time):
        return PopularityParams(self.alpha, self.beta, self.recency_window, reference_time)


class PopularityTable(object):

    def __init__(self, counts, scores, normalized):
        self.counts = counts
        self.scores = scores
        self.normalized = normalized


def iter_checkins(trajectories):
    for trajectory in trajectories:
        for checkin in trajectory.checkins:
            yield checkin


def get_reference_time(train_checkins):
    """
    "Recent" is anchored at the end of the train split.
    """
    return max(checkin.time for checkin in train_checkins)


def count_stats(train_checkins, poi, params):
    train_checkins = list(train_checkins)
    reference_time = params.reference_time or get_reference_time(train_checkins)
    recent_users, past_users = set(), set()
    recent, past = 0, 0
    seen = False
    for checkin in train_checkins:
        if checkin.poi != poi:
            continue
        seen = True
        if reference_time - checkin.time <= params.recency_window:
            recent += 1
            recent_users.add(checkin.user)
        else:
            past += 1
            past_users.add(checkin.user)
    if not seen:
        raise UnknownPoi(poi)
    return PopularityCounts(len(recent_users), recent, len(past_users), past)


def popularity(counts, alpha, beta):
    validate_weight('alpha', alpha)
    validate_weight('beta', beta)
    alpha, beta = float(alpha), float(beta)
    recent = alpha * counts.c_user_recent + (1.0 - alpha) * counts.c_checkin_recent
    past = alpha * counts.c_user_past + (1.0 - alpha) * counts.c_checkin_past
    return beta * recent + (1.0 - beta) * past


def frequency(counts):
    return counts.c_checkin_recent + counts.c_checkin_past


def normalize_scores(scores):
    """
    min-max of log1p(score), a constant table maps to 0.5
    """
    logs = OrderedDict((poi, math.log1p(score)) for poi, score in scores.items())
    low, high = min(logs.values()), max(logs.values())
    if high == low:
        return OrderedDict((poi, 0.5) for poi in logs)
    return OrderedDict((poi, (value - low) / (high - low)) for poi, value in logs.items())


def collect_counts(train, params):
    """
    All POI counts in one pass, identical to calling count_stats for every train POI.
    """
    checkins = list(iter_checkins(train))
    reference_time = params.reference_time or get_reference_time(checkins)
    per_poi = OrderedDict()
    for checkin in sorted(checkins, key=lambda checkin: checkin.poi):
        recent_users, recent, past_users, past = per_poi.setdefault(checkin.poi, (set(), [0], set(), [0]))
        if reference_time - checkin.time <= params.recency_window:
            recent[0] += 1
            recent_users.add(checkin.user)
        else:
            past[0] += 1
            past_users.add(checkin.user)
    return OrderedDict(
        (poi, PopularityCounts(len(recent_users), recent[0], len(past_users), past[0]))
        for poi, (recent_users, recent, past_users, past) in per_poi.items()
    )


def popularity_table(train, id_maps, params=None):
    if not train:
        raise DataError(_('Train split is empty.'))
    params = params or PopularityParams()
    counts = collect_counts(train, params)
    scores = OrderedDict((poi, popularity(poi_counts, params.alpha, params.beta))
                         for poi, poi_counts in counts.items())
    return PopularityTable(counts, scores, normalize_scores(scores))


def frequency_table(train, id_maps, params=None):
    """
    Baseline popularity: the raw train check-in count of every POI.
    """
    if not train:
        raise DataError(_('Train split is empty.'))
    counts = collect_counts(train, params or PopularityParams())
    scores = OrderedDict((poi, float(frequency(poi_counts))) for poi, poi_counts in counts.items())
    return PopularityTable(counts, scores, normalize_scores(scores))


def write_report(table, id_maps, stream):
    stream.write('\t'.join(('poi_raw_id', 'c_user_recent', 'c_checkin_recent', 'c_user_past', 'c_checkin_past',
                            'raw_score', 'normalized_score')))
    stream.write('\n')
    for poi, counts in table.counts.items():
        stream.write('\t'.join([id_maps.poi_ids[poi]] + [str(count) for count in counts]
                               + [repr(table.scores[poi]), repr(table.normalized[poi])]))
        stream.write('\n')
