import math

from collections import namedtuple

import numpy as np

from poi_core.exceptions import DomainError
from poi_core.nn import functional as F
from poi_core.nn.exceptions import ShapeMismatch
from poi_core.nn.tensor import Tensor
from poi_core.model.exceptions import AllMasked


LossBreakdown = namedtuple('LossBreakdown', ('total', 'poi', 'time', 'category'))


def gcn_forward(features, adj, weights, slope=0.2):
    """
    X <- leaky_relu(A X W) for every hidden layer, the last layer is linear.
    """
    x = Tensor(features.values)
    adjacency = Tensor(adj.values)
    if adjacency.shape != (x.shape[0], x.shape[0]):
        raise ShapeMismatch('Adjacency %s does not match %s nodes' % (adjacency.shape, x.shape[0]))
    for i, weight in enumerate(weights):
        x = F.matmul(adjacency, F.matmul(x, weight))
        if i < len(weights) - 1:
            x = F.leaky_relu(x, slope)
    return x


def time2vec(t, omega, phi):
    """
    t is a column of time-of-day fractions. Component 0 is linear, the others periodic.
    """
    t = np.asarray(t, dtype=np.float64).reshape(-1, 1)
    if t.size and (t.min() < 0.0 or t.max() >= 1.0):
        raise DomainError('Time fraction must be in [0, 1)')
    z = F.matmul(Tensor(t), omega) + phi
    width = omega.shape[1]
    if width == 1:
        return z
    return F.concat([F.take_columns(z, 0, 1), F.sin(F.take_columns(z, 1, width))], axis=1)


def fuse(left, right, weight, bias, slope=0.2):
    if left.shape != right.shape:
        raise ShapeMismatch('Fused embeddings %s and %s differ' % (left.shape, right.shape))
    return F.leaky_relu(F.matmul(F.concat([left, right], axis=1), weight) + bias, slope)


def fuse_poi_user(e_p, e_u, weight, bias, slope=0.2):
    return fuse(e_p, e_u, weight, bias, slope)


def fuse_time_category(e_t, e_c, weight, bias, slope=0.2):
    return fuse(e_t, e_c, weight, bias, slope)


def transition_attention(features, transition_mask, a_src, a_dst, slope=0.2):
    """
    Row i is a softmax of leaky_relu(x_i a_src + x_j a_dst) over the out-edges of i, non-edges are 0 and
    nodes without out-edges get a uniform row.
    """
    x = Tensor(features.values)
    transition_mask = np.asarray(transition_mask, dtype=bool)
    has_out = transition_mask.any(axis=1)[:, None]
    scores = F.leaky_relu(F.matmul(x, a_src) + F.transpose(F.matmul(x, a_dst)), slope)
    scores = F.mul(scores, Tensor(has_out.astype(np.float64)))
    return F.softmax_rows(scores, transition_mask | ~has_out)


def positional_encoding(length, width):
    positions = np.arange(length, dtype=np.float64)[:, None]
    rates = np.exp(-math.log(10000.0) * np.arange(0, width, 2, dtype=np.float64) / width)
    encoding = np.zeros((length, width))
    encoding[:, 0::2] = np.sin(positions * rates)
    encoding[:, 1::2] = np.cos(positions * rates[:width // 2])
    return encoding


def attention_mask(valid):
    """
    Causal mask restricted to valid (non padding) keys.
    """
    valid = np.asarray(valid, dtype=bool)
    return np.tril(np.ones((valid.size, valid.size), dtype=bool)) & valid[None, :]


def multi_head_attention(x, layer, heads, mask, scaled=True, attention_log=None):
    width = x.shape[1] // heads
    queries = F.matmul(x, layer['W_q'])
    keys = F.matmul(x, layer['W_k'])
    values = F.matmul(x, layer['W_v'])
    outputs = []
    for head in range(heads):
        start, stop = head * width, (head + 1) * width
        scores = F.matmul(F.take_columns(queries, start, stop), F.transpose(F.take_columns(keys, start, stop)))
        if scaled:
            scores = F.mul(scores, 1.0 / math.sqrt(width))
        weights = F.softmax_rows(scores, mask)
        if attention_log is not None:
            attention_log.append(weights.data)
        outputs.append(F.matmul(weights, F.take_columns(values, start, stop)))
    return F.matmul(F.concat(outputs, axis=1), layer['W_o'])


def encoder_layer(x, layer, heads, mask, scaled=True, random_state=None, dropout=0.0, attention_log=None):
    attended = multi_head_attention(x, layer, heads, mask, scaled, attention_log)
    x = F.layer_norm(x + F.dropout(attended, dropout, random_state), layer['norm1_gain'], layer['norm1_bias'])
    hidden = F.relu(F.matmul(x, layer['W_1']) + layer['b_1'])
    fc = F.matmul(hidden, layer['W_2']) + layer['b_2']
    return F.layer_norm(x + F.dropout(fc, dropout, random_state), layer['norm2_gain'], layer['norm2_bias'])


def encoder_forward(x0, layers, heads, valid=None, scaled=True, random_state=None, dropout=0.0,
                    attention_log=None):
    length, width = x0.shape
    if width % heads:
        raise ShapeMismatch('Model width %s is not divisible by %s heads' % (width, heads))
    if valid is None:
        valid = np.ones(length, dtype=bool)
    mask = attention_mask(valid)
    x = x0 + Tensor(positional_encoding(length, width))
    for layer in layers:
        x = encoder_layer(x, layer, heads, mask, scaled, random_state, dropout, attention_log)
    return x


def heads_forward(x, w_poi, b_poi, w_time, b_time, w_cat, b_cat):
    return (F.matmul(x, w_poi) + b_poi,
            F.matmul(x, w_time) + b_time,
            F.matmul(x, w_cat) + b_cat)


def final_poi_logits(y_poi, phi, input_pois):
    input_pois = np.asarray(input_pois)
    if input_pois.shape != (y_poi.shape[0],):
        raise ShapeMismatch('%s input POIs for %s positions' % (input_pois.shape, y_poi.shape[0]))
    return y_poi + F.take_rows(phi, input_pois)


def loss(logits_poi, y_time, logits_cat, targets, mask, time_factor=10.0):
    """
    L_poi + time_factor * L_time + L_cat. Cross entropies and the squared time error are averaged over
    the valid positions.
    """
    target_pois, target_times, target_categories = [np.asarray(target) for target in targets]
    rows = np.nonzero(np.asarray(mask, dtype=bool))[0]
    if not rows.size:
        raise AllMasked()
    count = float(rows.size)

    poi_loss = F.mul(F.sum(F.pick(F.log_softmax_rows(logits_poi), rows, target_pois[rows])), -1.0 / count)
    category_loss = F.mul(F.sum(F.pick(F.log_softmax_rows(logits_cat), rows, target_categories[rows])),
                          -1.0 / count)
    error = F.pick(y_time, rows, np.zeros(rows.size, dtype=int)) - target_times[rows]
    time_loss = F.mul(F.sum(F.mul(error, error)), 1.0 / count)
    total = poi_loss + F.mul(time_loss, time_factor) + category_loss
    return LossBreakdown(total, poi_loss, time_loss, category_loss)
