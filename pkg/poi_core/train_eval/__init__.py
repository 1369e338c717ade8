import logging
import math

from collections import OrderedDict

import numpy as np

from django.utils.translation import gettext_lazy as _

from poi_core import config
from poi_core.exceptions import ConfigurationError, DivergenceDetected
from poi_core.ingest.exceptions import EmptyTrain
from poi_core.model import GetNextModel, ModelConfig
from poi_core.model.inputs import build_graph_inputs
from poi_core.nn.tensor import Tape
from poi_core.utils import Enum, get_random_state, str_to_class, write_json_line
from poi_core.train_eval.examples import make_training_examples, make_batches
from poi_core.train_eval.exceptions import NoValidSamples
from poi_core.train_eval.metrics import MetricsReport, rank_of_target


logger = logging.getLogger('poi-core')

EVAL_UNITS = Enum(('position', 'trajectory_last'))


class TrainConfig(object):

    def __init__(self, epochs=None, batch_size=None, learning_rate=None, optimizer=None, seed=None, alpha=None,
                 beta=None):
        self.epochs = config.EPOCHS if epochs is None else epochs
        self.batch_size = config.BATCH_SIZE if batch_size is None else batch_size
        self.learning_rate = config.LEARNING_RATE if learning_rate is None else learning_rate
        self.optimizer = optimizer or config.OPTIMIZER
        self.seed = config.SEED if seed is None else seed
        self.alpha = config.POPULARITY_ALPHA if alpha is None else alpha
        self.beta = config.POPULARITY_BETA if beta is None else beta
        if self.epochs < 1:
            raise ConfigurationError(_('At least one epoch is required.'))
        if self.batch_size < 1:
            raise ConfigurationError(_('Batch size must be at least 1.'))
        if self.learning_rate < 0:
            raise ConfigurationError(_('Learning rate must not be negative.'))

    def get_optimizer(self, params):
        optimizer_class = self.optimizer
        if isinstance(optimizer_class, str):
            try:
                optimizer_class = str_to_class(optimizer_class)
            except (ImportError, AttributeError, ValueError):
                raise ConfigurationError(_('Unknown optimizer %s.') % self.optimizer)
        return optimizer_class(params, self.learning_rate)


class TrainResult(object):

    def __init__(self, model, trace, best_epoch):
        self.model = model
        self.trace = trace
        self.best_epoch = best_epoch

    @property
    def losses(self):
        return [record['mean_loss'] for record in self.trace]

    def as_dict(self):
        return {'best_epoch': self.best_epoch, 'trace': self.trace}


def build_model(split, id_maps, params=None, model_options=None, seed=None, baseline=False, with_frequency=None,
                self_loop_weight=None):
    graph = build_graph_inputs(split, id_maps, params, baseline, with_frequency, self_loop_weight)
    model_config = ModelConfig(n_pois=id_maps.n_pois, n_users=id_maps.n_users, n_categories=id_maps.n_categories,
                               n_features=graph.n_features, **(model_options or {}))
    return GetNextModel(model_config, graph, seed)


def evaluate(model, trajectories, k_list=None, eval_unit=None, alpha=None, beta=None):
    """
    Ranks the true next POI of every supervised position (or only of the last transition with
    eval_unit="trajectory_last") and aggregates Acc@k and MRR over all samples.
    """
    eval_unit = eval_unit or config.EVAL_UNIT
    if eval_unit not in EVAL_UNITS:
        raise ConfigurationError(_('Unknown evaluation unit %s.') % eval_unit)
    examples = make_training_examples(trajectories, model.graph.poi_categories, model.config.time_target,
                                      model.config.max_seq_len)
    if not examples:
        raise NoValidSamples()

    poi_embeddings = model.poi_embeddings()
    phi = model.transition_attention()
    ranks = []
    for example in examples:
        length = len(example.pois)
        logits, _y_time, _logits_cat = model.sequence_forward(
            example.pois, np.full(length, example.user, dtype=np.int64), example.categories, example.times,
            poi_embeddings, phi
        )
        positions = range(length) if eval_unit == EVAL_UNITS.position else (length - 1,)
        ranks.extend(rank_of_target(logits.data[i], example.target_pois[i]) for i in positions)
    return MetricsReport.from_ranks(ranks, k_list, alpha, beta)


def train(model, split, cfg=None, log_stream=None, k_list=None, eval_unit=None, log_extra=None):
    """
    Minibatch training on L_final. Batches are reshuffled every epoch from the seeded random state; the
    parameters of the epoch with the best validation MRR are restored at the end (the last epoch when the
    validation split is empty).
    """
    cfg = cfg or TrainConfig()
    if not split.train:
        raise EmptyTrain()

    examples = make_training_examples(split.train, model.graph.poi_categories, model.config.time_target,
                                      model.config.max_seq_len)
    optimizer = cfg.get_optimizer(model.get_parameters())
    random_state = get_random_state(cfg.seed)
    dropout_state = random_state if model.config.dropout else None

    trace = []
    best_epoch, best_mrr, best_state = None, None, None
    for epoch in range(1, cfg.epochs + 1):
        order = random_state.permutation(len(examples))
        losses = []
        for batch in make_batches([examples[i] for i in order], cfg.batch_size):
            optimizer.zero_grad()
            with Tape() as tape:
                breakdown = model.batch_loss(batch, dropout_state)
                tape.backward(breakdown.total)
            value = breakdown.total.item()
            if not math.isfinite(value):
                raise DivergenceDetected(epoch, value)
            optimizer.step()
            losses.append(value)
            logger.debug('Epoch %s batch of %s positions, loss %s', epoch, batch.n_positions, value)

        mean_loss = float(np.mean(losses))
        if not math.isfinite(mean_loss):
            raise DivergenceDetected(epoch, mean_loss)
        val_mrr = evaluate(model, split.validation, k_list, eval_unit).mrr if split.validation else None

        record = OrderedDict(log_extra or ())
        record.update((('epoch', epoch), ('mean_loss', mean_loss), ('val_mrr', val_mrr)))
        trace.append(record)
        if log_stream is not None:
            write_json_line(log_stream, record)
        logger.info('Epoch %s/%s mean loss %.6f, validation MRR %s', epoch, cfg.epochs, mean_loss, val_mrr)

        if best_epoch is None or val_mrr is None or val_mrr > best_mrr:
            best_epoch, best_mrr, best_state = epoch, val_mrr, model.state_dict()

    model.load_state_dict(best_state)
    return TrainResult(model, trace, best_epoch)
