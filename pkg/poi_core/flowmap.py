from collections import OrderedDict, namedtuple

import numpy as np

from poi_core import config


NodeAttrs = namedtuple('NodeAttrs', ('popularity', 'category', 'lat', 'lon', 'frequency'))


class FlowMap(object):
    """
    Attributed weighted directed graph of consecutive POI visits over the train trajectories.
    """

    def __init__(self, n_nodes, edges, node_attrs):
        self.n_nodes = n_nodes
        self.edges = edges
        self.node_attrs = node_attrs

    def directed_adjacency(self):
        adjacency = np.zeros((self.n_nodes, self.n_nodes))
        for (src, dst), weight in self.edges.items():
            adjacency[src, dst] = weight
        return adjacency

    @property
    def total_weight(self):
        return sum(self.edges.values())


class FeatureMatrix(object):

    def __init__(self, values, columns):
        self.values = values
        self.columns = columns

    @property
    def shape(self):
        return self.values.shape


class NormalizedAdjacency(object):

    def __init__(self, values):
        self.values = values


def build_flow_map(train, id_maps, pop, frequency=None):
    counts = OrderedDict()
    for trajectory in train:
        for current, following in zip(trajectory.checkins[:-1], trajectory.checkins[1:]):
            key = (current.poi, following.poi)
            counts[key] = counts.get(key, 0) + 1
    edges = OrderedDict((key, counts[key]) for key in sorted(counts))

    node_attrs = []
    for poi in range(id_maps.n_pois):
        meta = id_maps.poi_meta[poi]
        node_attrs.append(NodeAttrs(
            popularity=pop.normalized[poi],
            category=meta.category,
            lat=meta.lat,
            lon=meta.lon,
            frequency=frequency.normalized[poi] if frequency is not None else None,
        ))
    return FlowMap(id_maps.n_pois, edges, node_attrs)


def min_max(values):
    low, high = values.min(), values.max()
    if high == low:
        return np.full_like(values, 0.5)
    return (values - low) / (high - low)


def feature_matrix(fm, n_categories, with_frequency=None):
    """
    Columns: popularity, [frequency], lat_norm, lon_norm, one-hot category block of width n_categories.
    """
    if with_frequency is None:
        with_frequency = config.POPULARITY_WITH_FREQUENCY
    attrs = fm.node_attrs
    columns = ['popularity']
    blocks = [np.array([[node.popularity] for node in attrs], dtype=np.float64)]
    if with_frequency:
        columns.append('frequency')
        blocks.append(np.array([[node.frequency] for node in attrs], dtype=np.float64))
    columns += ['lat_norm', 'lon_norm']
    blocks.append(min_max(np.array([[node.lat] for node in attrs], dtype=np.float64)))
    blocks.append(min_max(np.array([[node.lon] for node in attrs], dtype=np.float64)))

    one_hot = np.zeros((fm.n_nodes, n_categories))
    one_hot[np.arange(fm.n_nodes), [node.category for node in attrs]] = 1.0
    columns += ['category_%s' % category for category in range(n_categories)]
    blocks.append(one_hot)
    return FeatureMatrix(np.hstack(blocks), columns)


def normalized_adjacency(fm, self_loop_weight=None):
    """
    D^-1/2 (A + A^T + lambda I) D^-1/2, D the row degree of the bracketed matrix.
    """
    if self_loop_weight is None:
        self_loop_weight = config.SELF_LOOP_WEIGHT
    adjacency = fm.directed_adjacency()
    propagation = adjacency + adjacency.T + self_loop_weight * np.eye(fm.n_nodes)
    degree = propagation.sum(axis=1)
    inv_sqrt = np.zeros_like(degree)
    inv_sqrt[degree > 0] = 1.0 / np.sqrt(degree[degree > 0])
    values = inv_sqrt[:, None] * propagation * inv_sqrt[None, :]
    # exact symmetry, the elementwise products may differ in the last bit
    return NormalizedAdjacency((values + values.T) / 2.0)


def export_edge_list(fm, id_maps, stream):
    for (src, dst), weight in fm.edges.items():
        stream.write('%s\t%s\t%s\n' % (id_maps.poi_ids[src], id_maps.poi_ids[dst], weight))
