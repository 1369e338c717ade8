import math

from collections import OrderedDict

import numpy as np

from django.utils.translation import gettext_lazy as _

from poi_core import config
from poi_core.exceptions import ConfigurationError, DataError
from poi_core.nn import functional as F
from poi_core.nn.tensor import Parameter
from poi_core.model import layers
from poi_core.model.inputs import time_of_day
from poi_core.utils import Enum, get_random_state


TIME_TARGETS = Enum(('time_of_day', 'interval'))


class ModelConfig(object):
    """
    Widths and vocabulary sizes of the network. The check-in embedding width d is 2 * user_dim + 2 * timecat_dim.
    """

    fields = ('n_pois', 'n_users', 'n_categories', 'n_features', 'user_dim', 'timecat_dim', 'heads', 'layers',
              'ffn_dim', 'gcn_hidden', 'max_seq_len', 'activation_slope', 'dropout', 'unscaled_attention',
              'time_target')

    def __init__(self, n_pois, n_users, n_categories, n_features, user_dim=None, timecat_dim=None, heads=None,
                 layers=None, ffn_dim=None, gcn_hidden=None, max_seq_len=None, activation_slope=None, dropout=None,
                 unscaled_attention=None, time_target=None, model_dim=None):
        self.n_pois = n_pois
        self.n_users = n_users
        self.n_categories = n_categories
        self.n_features = n_features
        self.user_dim = config.USER_DIM if user_dim is None else user_dim
        self.timecat_dim = config.TIMECAT_DIM if timecat_dim is None else timecat_dim
        self.heads = config.HEADS if heads is None else heads
        self.layers = config.LAYERS if layers is None else layers
        self.ffn_dim = config.FFN_DIM if ffn_dim is None else ffn_dim
        self.gcn_hidden = list(config.GCN_HIDDEN if gcn_hidden is None else gcn_hidden)
        self.max_seq_len = config.MAX_SEQ_LEN if max_seq_len is None else max_seq_len
        self.activation_slope = config.ACTIVATION_SLOPE if activation_slope is None else activation_slope
        self.dropout = config.DROPOUT if dropout is None else dropout
        self.unscaled_attention = config.UNSCALED_ATTENTION if unscaled_attention is None else unscaled_attention
        self.time_target = time_target or config.TIME_TARGET
        self.validate(model_dim)

    @property
    def model_dim(self):
        return 2 * self.user_dim + 2 * self.timecat_dim

    def validate(self, model_dim=None):
        sizes = [self.n_pois, self.n_users, self.n_categories, self.n_features, self.user_dim, self.timecat_dim,
                 self.heads, self.layers, self.ffn_dim, self.max_seq_len] + self.gcn_hidden
        if any(size < 1 for size in sizes):
            raise ConfigurationError(_('All model dimensions must be at least 1.'))
        if model_dim is not None and model_dim != self.model_dim:
            raise ConfigurationError(_('model_dim %(model_dim)s must equal 2 * user_dim + 2 * timecat_dim = '
                                       '%(expected)s.') % {'model_dim': model_dim, 'expected': self.model_dim})
        if self.model_dim % self.heads:
            raise ConfigurationError(_('model_dim %(model_dim)s is not divisible by %(heads)s heads.') %
                                     {'model_dim': self.model_dim, 'heads': self.heads})
        if self.time_target not in TIME_TARGETS:
            raise ConfigurationError(_('Unknown time target %s.') % self.time_target)

    def as_dict(self):
        return OrderedDict((field, getattr(self, field)) for field in self.fields)

    @classmethod
    def from_dict(cls, data):
        return cls(**{field: data[field] for field in cls.fields if field in data})


def uniform_matrix(random_state, fan_in, fan_out):
    bound = 1.0 / math.sqrt(fan_in)
    return random_state.uniform(-bound, bound, size=(fan_in, fan_out))


class GetNextModel(object):
    """
    GCN POI embeddings, contextual fusion, transition attention map, transformer encoder and three MLP heads.
    """

    def __init__(self, model_config, graph, seed=None):
        self.config = model_config
        self.graph = graph
        self.parameters = OrderedDict()
        self.init_parameters(get_random_state(config.SEED if seed is None else seed))

    def add_parameter(self, name, data):
        self.parameters[name] = Parameter(data, name=name)
        return self.parameters[name]

    def init_parameters(self, random_state):
        cfg = self.config
        omega, psi, d = cfg.user_dim, cfg.timecat_dim, cfg.model_dim

        self.add_parameter('user_table', random_state.normal(0.0, 0.02, size=(cfg.n_users, omega)))
        self.add_parameter('category_table', random_state.normal(0.0, 0.02, size=(cfg.n_categories, psi)))
        self.add_parameter('time2vec.omega', np.geomspace(1.0, 2.0 * math.pi * 7.0, psi)[None, :])
        self.add_parameter('time2vec.phi', np.zeros((1, psi)))

        widths = [cfg.n_features] + cfg.gcn_hidden + [omega]
        for i, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
            self.add_parameter('gcn.%s' % i, uniform_matrix(random_state, fan_in, fan_out))

        self.add_parameter('fusion.poi_user.weight', uniform_matrix(random_state, 2 * omega, 2 * omega))
        self.add_parameter('fusion.poi_user.bias', np.zeros(2 * omega))
        self.add_parameter('fusion.time_category.weight', uniform_matrix(random_state, 2 * psi, 2 * psi))
        self.add_parameter('fusion.time_category.bias', np.zeros(2 * psi))

        self.add_parameter('attention_map.a_src', uniform_matrix(random_state, cfg.n_features, 1))
        self.add_parameter('attention_map.a_dst', uniform_matrix(random_state, cfg.n_features, 1))

        for layer in range(cfg.layers):
            prefix = 'encoder.%s.' % layer
            for name in ('W_q', 'W_k', 'W_v', 'W_o'):
                self.add_parameter(prefix + name, uniform_matrix(random_state, d, d))
            self.add_parameter(prefix + 'norm1_gain', np.ones(d))
            self.add_parameter(prefix + 'norm1_bias', np.zeros(d))
            self.add_parameter(prefix + 'W_1', uniform_matrix(random_state, d, cfg.ffn_dim))
            self.add_parameter(prefix + 'b_1', np.zeros(cfg.ffn_dim))
            self.add_parameter(prefix + 'W_2', uniform_matrix(random_state, cfg.ffn_dim, d))
            self.add_parameter(prefix + 'b_2', np.zeros(d))
            self.add_parameter(prefix + 'norm2_gain', np.ones(d))
            self.add_parameter(prefix + 'norm2_bias', np.zeros(d))

        self.add_parameter('heads.W_poi', uniform_matrix(random_state, d, cfg.n_pois))
        self.add_parameter('heads.b_poi', np.zeros(cfg.n_pois))
        self.add_parameter('heads.W_time', uniform_matrix(random_state, d, 1))
        self.add_parameter('heads.b_time', np.zeros(1))
        self.add_parameter('heads.W_cat', uniform_matrix(random_state, d, cfg.n_categories))
        self.add_parameter('heads.b_cat', np.zeros(cfg.n_categories))

    def get_parameters(self):
        return list(self.parameters.values())

    @property
    def n_parameters(self):
        return sum(param.size for param in self.parameters.values())

    def get_layer(self, layer):
        prefix = 'encoder.%s.' % layer
        return {name[len(prefix):]: param for name, param in self.parameters.items() if name.startswith(prefix)}

    def get_gcn_weights(self):
        return [self.parameters['gcn.%s' % i] for i in range(len(self.config.gcn_hidden) + 1)]

    def state_dict(self):
        return OrderedDict((name, param.data.copy()) for name, param in self.parameters.items())

    def load_state_dict(self, state):
        for name, param in self.parameters.items():
            if name not in state:
                raise DataError(_('Parameter %s is missing.') % name)
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != param.shape:
                raise DataError(_('Parameter %(name)s has shape %(shape)s, expected %(expected)s.') %
                                {'name': name, 'shape': value.shape, 'expected': param.shape})
            param.data[...] = value

    def poi_embeddings(self):
        return layers.gcn_forward(self.graph.features, self.graph.adjacency, self.get_gcn_weights(),
                                  self.config.activation_slope)

    def transition_attention(self):
        return layers.transition_attention(self.graph.features, self.graph.transition_mask,
                                           self.parameters['attention_map.a_src'],
                                           self.parameters['attention_map.a_dst'], self.config.activation_slope)

    def checkin_embeddings(self, pois, users, categories, times, poi_embeddings):
        """
        e_q = [fuse_poi_user(e_p, e_u) ; fuse_time_category(time2vec(t), e_c)] for every position.
        """
        params, slope = self.parameters, self.config.activation_slope
        e_pu = layers.fuse_poi_user(F.take_rows(poi_embeddings, pois), F.take_rows(params['user_table'], users),
                                    params['fusion.poi_user.weight'], params['fusion.poi_user.bias'], slope)
        e_t = layers.time2vec(times, params['time2vec.omega'], params['time2vec.phi'])
        e_ct = layers.fuse_time_category(e_t, F.take_rows(params['category_table'], categories),
                                         params['fusion.time_category.weight'], params['fusion.time_category.bias'],
                                         slope)
        return F.concat([e_pu, e_ct], axis=1)

    def checkin_embedding(self, checkin, poi_embeddings):
        x = self.checkin_embeddings([checkin.poi], [checkin.user], [self.graph.poi_categories[checkin.poi]],
                                    [time_of_day(checkin)], poi_embeddings)
        return F.reshape(x, (self.config.model_dim,))

    def encode(self, x0, valid=None, random_state=None, attention_log=None):
        return layers.encoder_forward(x0, [self.get_layer(layer) for layer in range(self.config.layers)],
                                      self.config.heads, valid, not self.config.unscaled_attention, random_state,
                                      self.config.dropout, attention_log)

    def heads(self, x):
        params = self.parameters
        return layers.heads_forward(x, params['heads.W_poi'], params['heads.b_poi'], params['heads.W_time'],
                                    params['heads.b_time'], params['heads.W_cat'], params['heads.b_cat'])

    def sequence_forward(self, pois, users, categories, times, poi_embeddings, phi, valid=None, random_state=None,
                         attention_log=None):
        """
        Returns (final POI logits [k x N], time predictions [k x 1], category logits [k x C]).
        """
        x0 = self.checkin_embeddings(pois, users, categories, times, poi_embeddings)
        y_poi, y_time, y_cat = self.heads(self.encode(x0, valid, random_state, attention_log))
        return layers.final_poi_logits(y_poi, phi, pois), y_time, y_cat

    def batch_forward(self, batch, random_state=None):
        poi_embeddings = self.poi_embeddings()
        phi = self.transition_attention()
        outputs = [self.sequence_forward(batch.pois[b], batch.users[b], batch.categories[b], batch.times[b],
                                         poi_embeddings, phi, batch.mask[b], random_state)
                   for b in range(len(batch))]
        return tuple(F.concat(parts, axis=0) for parts in zip(*outputs))

    def batch_loss(self, batch, random_state=None):
        logits_poi, y_time, logits_cat = self.batch_forward(batch, random_state)
        targets = (batch.target_pois.reshape(-1), batch.target_times.reshape(-1),
                   batch.target_categories.reshape(-1))
        return layers.loss(logits_poi, y_time, logits_cat, targets, batch.mask.reshape(-1),
                           config.TIME_LOSS_FACTOR)
