"""
Teacher forced training examples. Position i of a trajectory reads check-in q_i and is supervised by q_{i+1}.
"""
from collections import namedtuple

import numpy as np

from poi_core import config
from poi_core.model.inputs import time_of_day, interval_fraction


TrainingExample = namedtuple('TrainingExample', ('user', 'pois', 'categories', 'times', 'target_pois',
                                                 'target_times', 'target_categories'))


class Batch(object):
    """
    Examples padded to the longest member. mask[b, i] is True for the real positions of member b.
    """

    def __init__(self, pois, users, categories, times, target_pois, target_times, target_categories, mask):
        self.pois = pois
        self.users = users
        self.categories = categories
        self.times = times
        self.target_pois = target_pois
        self.target_times = target_times
        self.target_categories = target_categories
        self.mask = mask

    def __len__(self):
        return self.mask.shape[0]

    @property
    def n_positions(self):
        return int(self.mask.sum())


def make_example(trajectory, poi_categories, time_target=None, max_seq_len=None, window_hours=None):
    time_target = time_target or config.TIME_TARGET
    max_seq_len = config.MAX_SEQ_LEN if max_seq_len is None else max_seq_len
    checkins = trajectory.checkins
    # the most recent max_seq_len transitions are kept
    pairs = list(zip(checkins[:-1], checkins[1:]))[-max_seq_len:]
    inputs = [current for current, _following in pairs]
    targets = [following for _current, following in pairs]
    if time_target == 'interval':
        target_times = [interval_fraction(current, following, window_hours) for current, following in pairs]
    else:
        target_times = [time_of_day(following) for following in targets]
    return TrainingExample(
        user=trajectory.user,
        pois=np.array([checkin.poi for checkin in inputs], dtype=np.int64),
        categories=np.array([poi_categories[checkin.poi] for checkin in inputs], dtype=np.int64),
        times=np.array([time_of_day(checkin) for checkin in inputs], dtype=np.float64),
        target_pois=np.array([checkin.poi for checkin in targets], dtype=np.int64),
        target_times=np.array(target_times, dtype=np.float64),
        target_categories=np.array([poi_categories[checkin.poi] for checkin in targets], dtype=np.int64),
    )


def make_training_examples(trajectories, poi_categories, time_target=None, max_seq_len=None, window_hours=None):
    return [make_example(trajectory, poi_categories, time_target, max_seq_len, window_hours)
            for trajectory in trajectories]


def pad_batch(examples):
    width = max(len(example.pois) for example in examples)
    shape = (len(examples), width)
    batch = Batch(
        pois=np.zeros(shape, dtype=np.int64),
        users=np.zeros(shape, dtype=np.int64),
        categories=np.zeros(shape, dtype=np.int64),
        times=np.zeros(shape, dtype=np.float64),
        target_pois=np.zeros(shape, dtype=np.int64),
        target_times=np.zeros(shape, dtype=np.float64),
        target_categories=np.zeros(shape, dtype=np.int64),
        mask=np.zeros(shape, dtype=bool),
    )
    for b, example in enumerate(examples):
        length = len(example.pois)
        batch.pois[b, :length] = example.pois
        batch.users[b, :length] = example.user
        batch.categories[b, :length] = example.categories
        batch.times[b, :length] = example.times
        batch.target_pois[b, :length] = example.target_pois
        batch.target_times[b, :length] = example.target_times
        batch.target_categories[b, :length] = example.target_categories
        batch.mask[b, :length] = True
    return batch


def make_batches(examples, batch_size=None):
    batch_size = batch_size or config.BATCH_SIZE
    for start in range(0, len(examples), batch_size):
        yield pad_batch(examples[start:start + batch_size])
