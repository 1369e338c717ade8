import logging
import math

from collections import Counter, OrderedDict, namedtuple
from datetime import timedelta

from django.utils.translation import gettext_lazy as _

from poi_core import config
from poi_core.exceptions import ConfigurationError
from poi_core.utils import str_to_class, Enum
from poi_core.ingest.exceptions import MalformedLine, TooManyMalformedLines, EmptyAfterFilter, EmptyTrain


logger = logging.getLogger('poi-core')

SPLIT_EXCLUSION_MODES = Enum(('trajectory', 'checkin'))


RawCheckInRecord = namedtuple('RawCheckInRecord', ('user_id', 'poi_id', 'category_id', 'category_name', 'lat', 'lon',
                                                   'tz_offset', 'timestamp'))

CheckIn = namedtuple('CheckIn', ('user', 'poi', 'time', 'tz_offset'))
CheckIn.__new__.__defaults__ = (0,)

Trajectory = namedtuple('Trajectory', ('user', 'checkins'))

SplitDataset = namedtuple('SplitDataset', ('train', 'validation', 'test'))

PoiMeta = namedtuple('PoiMeta', ('category', 'lat', 'lon'))


class IdMaps(object):
    """
    Dense index bijections of users, POIs and categories in order of first appearance.
    """

    def __init__(self, user_ids=(), poi_ids=(), category_ids=(), category_names=(), poi_meta=()):
        self.user_ids = list(user_ids)
        self.poi_ids = list(poi_ids)
        self.category_ids = list(category_ids)
        self.category_names = list(category_names)
        self.poi_meta = [PoiMeta(*meta) for meta in poi_meta]
        self.user_index = {raw_id: i for i, raw_id in enumerate(self.user_ids)}
        self.poi_index = {raw_id: i for i, raw_id in enumerate(self.poi_ids)}
        self.category_index = {raw_id: i for i, raw_id in enumerate(self.category_ids)}

    @property
    def n_users(self):
        return len(self.user_ids)

    @property
    def n_pois(self):
        return len(self.poi_ids)

    @property
    def n_categories(self):
        return len(self.category_ids)

    def get_category(self, poi):
        return self.poi_meta[poi].category

    def __eq__(self, other):
        return isinstance(other, IdMaps) and self.as_dict() == other.as_dict()

    def as_dict(self):
        return {
            'user_ids': self.user_ids,
            'poi_ids': self.poi_ids,
            'category_ids': self.category_ids,
            'category_names': self.category_names,
            'poi_meta': [list(meta) for meta in self.poi_meta],
        }


class CheckInDataset(object):
    """
    Per-user time ordered check-in sequences (Q_u for every user).
    """

    def __init__(self, sequences, id_maps):
        self.sequences = sequences
        self.id_maps = id_maps

    def __len__(self):
        return sum(len(sequence) for sequence in self.sequences.values())


class ProcessedDataset(object):

    def __init__(self, split, id_maps, statistics, malformed_lines=()):
        self.split = split
        self.id_maps = id_maps
        self.statistics = statistics
        self.malformed_lines = list(malformed_lines)


def get_layout(layout=None):
    if layout is None:
        layout = config.INGEST_LAYOUT
    if isinstance(layout, str):
        try:
            layout = str_to_class(layout)
        except (ImportError, AttributeError, ValueError):
            raise ConfigurationError(_('Unknown check-in layout %s.') % layout)
    if isinstance(layout, type):
        layout = layout()
    return layout


def parse_line(values, layout):
    return RawCheckInRecord(
        user_id=layout.get_value(values, 'user_id').strip(),
        poi_id=layout.get_value(values, 'poi_id').strip(),
        category_id=layout.get_value(values, 'category_id').strip(),
        category_name=layout.get_value(values, 'category_name').strip(),
        lat=layout.parse_coordinate(layout.get_value(values, 'lat'), 90),
        lon=layout.parse_coordinate(layout.get_value(values, 'lon'), 180),
        tz_offset=layout.parse_offset(layout.get_value(values, 'tz_offset')),
        timestamp=layout.parse_timestamp(layout.get_value(values, 'timestamp')),
    )


def parse_checkins(source, layout=None, max_malformed_ratio=None):
    """
    Parse raw check-in lines. Returns the records in input order and the list of collected MalformedLine
    errors. Blank lines are skipped.
    """
    layout = get_layout(layout)
    if max_malformed_ratio is None:
        max_malformed_ratio = config.INGEST_MAX_MALFORMED_RATIO

    records = []
    errors = []
    total = 0
    for line_no, line in enumerate(source, 1):
        if not line.strip():
            continue
        total += 1
        values = layout.split(line)
        if len(values) != layout.n_columns:
            errors.append(MalformedLine(line_no, _('expected %s columns, found %s') % (layout.n_columns, len(values))))
            continue
        try:
            records.append(parse_line(values, layout))
        except (ValueError, OverflowError) as ex:
            errors.append(MalformedLine(line_no, str(ex)))

    for error in errors:
        logger.warning(str(error))
    if errors and len(errors) > max_malformed_ratio * total:
        raise TooManyMalformedLines(errors, total)
    return records, errors


def filter_sparse(records, min_user_checkins=None, min_poi_checkins=None):
    """
    POI filter first, then user filter over the remaining records. Single pass each.
    """
    min_user_checkins = config.MIN_USER_CHECKINS if min_user_checkins is None else min_user_checkins
    min_poi_checkins = config.MIN_POI_CHECKINS if min_poi_checkins is None else min_poi_checkins
    if min_user_checkins < 1 or min_poi_checkins < 1:
        raise ConfigurationError(_('Sparsity thresholds must be at least 1.'))

    poi_counts = Counter(record.poi_id for record in records)
    records = [record for record in records if poi_counts[record.poi_id] >= min_poi_checkins]
    user_counts = Counter(record.user_id for record in records)
    records = [record for record in records if user_counts[record.user_id] >= min_user_checkins]
    if not records:
        raise EmptyAfterFilter()
    return records


def build_id_maps(records, tolerance=None):
    if not records:
        raise EmptyAfterFilter()
    tolerance = config.POI_META_TOLERANCE if tolerance is None else tolerance

    users = OrderedDict()
    pois = OrderedDict()
    categories = OrderedDict()
    for record in records:
        users.setdefault(record.user_id, len(users))
        categories.setdefault(record.category_id, record.category_name)
        if record.poi_id not in pois:
            pois[record.poi_id] = record
        else:
            first = pois[record.poi_id]
            if (abs(first.lat - record.lat) > tolerance or abs(first.lon - record.lon) > tolerance
                    or first.category_id != record.category_id or first.category_name != record.category_name):
                logger.warning('Conflicting metadata of POI %s (%s, %s, %s) vs (%s, %s, %s), keeping the first',
                               record.poi_id, first.category_name, first.lat, first.lon,
                               record.category_name, record.lat, record.lon)

    category_ids = list(categories.keys())
    category_index = {raw_id: i for i, raw_id in enumerate(category_ids)}
    return IdMaps(
        user_ids=users.keys(),
        poi_ids=pois.keys(),
        category_ids=category_ids,
        category_names=categories.values(),
        poi_meta=[(category_index[record.category_id], record.lat, record.lon) for record in pois.values()],
    )


def build_dataset(records, id_maps):
    sequences = OrderedDict((user, []) for user in range(id_maps.n_users))
    for record in records:
        user = id_maps.user_index[record.user_id]
        sequences[user].append(CheckIn(user, id_maps.poi_index[record.poi_id], record.timestamp, record.tz_offset))
    for user, sequence in sequences.items():
        # stable, equal timestamps keep the input order
        sequence.sort(key=lambda checkin: checkin.time)
    return CheckInDataset(sequences, id_maps)


def get_window(window=None):
    if window is None:
        return timedelta(hours=config.TRAJECTORY_WINDOW_HOURS)
    if isinstance(window, timedelta):
        return window
    return timedelta(hours=window)


def cut_trajectories(sequence, window=None):
    """
    Greedy cut of one time sorted sequence, every part spans at most window from its first check-in.
    Returns all parts, singletons included.
    """
    window = get_window(window)
    parts = []
    for checkin in sequence:
        if parts and checkin.time - parts[-1][0].time <= window:
            parts[-1].append(checkin)
        else:
            parts.append([checkin])
    return parts


def segment_trajectories(dataset, window=None):
    trajectories = []
    for user, sequence in dataset.sequences.items():
        for part in cut_trajectories(sequence, window):
            if len(part) >= 2:
                trajectories.append(Trajectory(user, tuple(part)))
    return trajectories


def get_fractions(fractions=None):
    if fractions is None:
        fractions = (config.TRAIN_FRACTION, config.VALIDATION_FRACTION, config.TEST_FRACTION)
    if len(fractions) != 3 or any(fraction <= 0 for fraction in fractions) or not math.isclose(sum(fractions), 1.0):
        raise ConfigurationError(_('Split fractions must be three positive numbers summing to 1, got %s.')
                                 % (fractions,))
    return fractions


def exclude_unseen(trajectories, users, pois, mode):
    kept = []
    for trajectory in trajectories:
        if trajectory.user not in users:
            continue
        if mode == SPLIT_EXCLUSION_MODES.checkin:
            checkins = tuple(checkin for checkin in trajectory.checkins if checkin.poi in pois)
            if len(checkins) >= 2:
                kept.append(Trajectory(trajectory.user, checkins))
        elif all(checkin.poi in pois for checkin in trajectory.checkins):
            kept.append(trajectory)
    return kept


def split_dataset(trajectories, fractions=None, exclusion=None):
    train_fraction, validation_fraction, _test_fraction = get_fractions(fractions)
    exclusion = exclusion or config.SPLIT_EXCLUSION
    if exclusion not in SPLIT_EXCLUSION_MODES:
        raise ConfigurationError(_('Unknown split exclusion mode %s.') % exclusion)

    ordered = sorted(trajectories, key=lambda trajectory: trajectory.checkins[0].time)
    n = len(ordered)
    n_train = int(math.floor(train_fraction * n))
    n_validation = int(math.floor(validation_fraction * n))
    if n_train == 0:
        raise EmptyTrain()

    train = ordered[:n_train]
    users = {trajectory.user for trajectory in train}
    pois = {checkin.poi for trajectory in train for checkin in trajectory.checkins}
    validation = exclude_unseen(ordered[n_train:n_train + n_validation], users, pois, exclusion)
    test = exclude_unseen(ordered[n_train + n_validation:], users, pois, exclusion)
    logger.info('Split %s trajectories into %s/%s/%s (train/validation/test), %s excluded',
                n, len(train), len(validation), len(test), n - len(train) - len(validation) - len(test))
    return SplitDataset(train, validation, test)


def compact_to_train(split, id_maps):
    """
    Reindex users, POIs and categories to the vocabulary visible in the train split, preserving order.
    """
    train_users = {trajectory.user for trajectory in split.train}
    train_pois = {checkin.poi for trajectory in split.train for checkin in trajectory.checkins}
    users = [user for user in range(id_maps.n_users) if user in train_users]
    pois = [poi for poi in range(id_maps.n_pois) if poi in train_pois]
    train_categories = {id_maps.get_category(poi) for poi in pois}
    categories = [category for category in range(id_maps.n_categories) if category in train_categories]

    user_map = {old: new for new, old in enumerate(users)}
    poi_map = {old: new for new, old in enumerate(pois)}
    category_map = {old: new for new, old in enumerate(categories)}

    compact_maps = IdMaps(
        user_ids=[id_maps.user_ids[user] for user in users],
        poi_ids=[id_maps.poi_ids[poi] for poi in pois],
        category_ids=[id_maps.category_ids[category] for category in categories],
        category_names=[id_maps.category_names[category] for category in categories],
        poi_meta=[(category_map[id_maps.poi_meta[poi].category], id_maps.poi_meta[poi].lat,
                   id_maps.poi_meta[poi].lon) for poi in pois],
    )

    def remap(trajectories):
        return [Trajectory(user_map[trajectory.user],
                           tuple(CheckIn(user_map[checkin.user], poi_map[checkin.poi], checkin.time, checkin.tz_offset)
                                 for checkin in trajectory.checkins))
                for trajectory in trajectories]

    return SplitDataset(remap(split.train), remap(split.validation), remap(split.test)), compact_maps


def dataset_statistics(records, trajectories):
    return OrderedDict((
        ('users', len({record.user_id for record in records})),
        ('pois', len({record.poi_id for record in records})),
        ('categories', len({record.category_id for record in records})),
        ('checkins', len(records)),
        ('trajectories', len(trajectories)),
    ))


def preprocess(source, layout=None, min_user_checkins=None, min_poi_checkins=None, window=None, fractions=None,
               exclusion=None, max_malformed_ratio=None):
    """
    parse -> filter -> segment -> split -> id maps (compacted to the train vocabulary)
    """
    records, errors = parse_checkins(source, layout, max_malformed_ratio)
    records = filter_sparse(records, min_user_checkins, min_poi_checkins)
    id_maps = build_id_maps(records)
    trajectories = segment_trajectories(build_dataset(records, id_maps), window)
    statistics = dataset_statistics(records, trajectories)
    split, id_maps = compact_to_train(split_dataset(trajectories, fractions, exclusion), id_maps)
    return ProcessedDataset(split, id_maps, statistics, errors)
