import numpy as np
import pytz

from poi_core import config
from poi_core.flowmap import build_flow_map, feature_matrix, normalized_adjacency
from poi_core.popularity import PopularityParams, popularity_table, frequency_table


SECONDS_PER_DAY = 24 * 60 * 60


def time_of_day(checkin):
    """
    Local time-of-day fraction in [0, 1) of the check-in, shifted by its timezone offset (minutes).
    """
    local = checkin.time.astimezone(pytz.FixedOffset(checkin.tz_offset))
    return (local.hour * 3600 + local.minute * 60 + local.second) / float(SECONDS_PER_DAY)


def interval_fraction(current, following, window_hours=None):
    """
    Gap to the following check-in normalized by the trajectory window.
    """
    window_hours = config.TRAJECTORY_WINDOW_HOURS if window_hours is None else window_hours
    return (following.time - current.time).total_seconds() / (window_hours * 3600.0)


class GraphInputs(object):
    """
    Everything the network reads from the train flow map: node features, propagation matrix, directed edge
    pattern and the category of every POI.
    """

    def __init__(self, flow_map, features, adjacency, popularity, poi_categories):
        self.flow_map = flow_map
        self.features = features
        self.adjacency = adjacency
        self.popularity = popularity
        self.poi_categories = poi_categories

    @property
    def transition_mask(self):
        return self.flow_map.directed_adjacency() > 0

    @property
    def n_features(self):
        return self.features.shape[1]


def build_graph_inputs(split, id_maps, params=None, baseline=False, with_frequency=None, self_loop_weight=None):
    """
    Rebuilds popularity, flow map, features and adjacency for one popularity configuration. With baseline the
    popularity column holds the plain check-in frequency.
    """
    params = params or PopularityParams()
    with_frequency = config.POPULARITY_WITH_FREQUENCY if with_frequency is None else with_frequency
    if baseline:
        pop, frequency, with_frequency = frequency_table(split.train, id_maps, params), None, False
    else:
        pop = popularity_table(split.train, id_maps, params)
        frequency = frequency_table(split.train, id_maps, params) if with_frequency else None
    flow_map = build_flow_map(split.train, id_maps, pop, frequency)
    return GraphInputs(
        flow_map,
        feature_matrix(flow_map, id_maps.n_categories, with_frequency),
        normalized_adjacency(flow_map, self_loop_weight),
        pop,
        np.array([id_maps.get_category(poi) for poi in range(id_maps.n_pois)], dtype=np.int64),
    )
