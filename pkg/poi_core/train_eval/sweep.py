import logging

from django.utils.translation import gettext_lazy as _

from poi_core import config
from poi_core.exceptions import ConfigurationError
from poi_core.popularity import PopularityParams
from poi_core.utils import write_comment_header
from poi_core.train_eval import TrainConfig, build_model, evaluate, train


logger = logging.getLogger('poi-core')

FORMAT = 'poi-core-sweep'
FORMAT_VERSION = 1

BASELINE_LABEL = 'baseline'


class SweepResult(object):
    """
    One MetricsReport per (alpha, beta) grid cell, in grid order, plus the frequency baseline.
    """

    def __init__(self, rows, baseline_row):
        self.rows = rows
        self.baseline_row = baseline_row

    def __len__(self):
        return len(self.rows) + 1

    @property
    def k_list(self):
        return list(self.baseline_row.acc_at.keys())


def run_cell(split, id_maps, params, cfg, model_options, graph_options, k_list, eval_unit, baseline, log_stream):
    model = build_model(split, id_maps, params, model_options, cfg.seed, baseline, **graph_options)
    if baseline:
        label = {'alpha': BASELINE_LABEL, 'beta': BASELINE_LABEL}
    else:
        label = {'alpha': params.alpha, 'beta': params.beta}
    train(model, split, cfg, log_stream, k_list, eval_unit, log_extra=label)
    report = evaluate(model, split.test, k_list, eval_unit, None if baseline else params.alpha,
                      None if baseline else params.beta)
    logger.info('Sweep cell %s/%s: %r', label['alpha'], label['beta'], report)
    return report


def sweep(split, id_maps, alpha_grid=None, beta_grid=None, cfg=None, model_options=None, recency_window=None,
          graph_options=None, k_list=None, eval_unit=None, log_stream=None):
    """
    Trains and tests one model per (alpha, beta) of the grid cross product with identical seed and settings,
    rebuilding popularity, flow map features and adjacency every time, and one baseline model whose
    popularity feature is the plain check-in frequency.
    """
    alpha_grid = list(config.ALPHA_GRID if alpha_grid is None else alpha_grid)
    beta_grid = list(config.BETA_GRID if beta_grid is None else beta_grid)
    if not alpha_grid or not beta_grid:
        raise ConfigurationError(_('Sweep grids must not be empty.'))
    cfg = cfg or TrainConfig()
    graph_options = dict(graph_options or {})

    baseline_row = run_cell(split, id_maps, PopularityParams(recency_window=recency_window), cfg, model_options,
                            dict(graph_options, with_frequency=False), k_list, eval_unit, True, log_stream)
    rows = []
    for alpha in alpha_grid:
        for beta in beta_grid:
            params = PopularityParams(alpha, beta, recency_window)
            rows.append((alpha, beta, run_cell(split, id_maps, params, cfg, model_options, graph_options, k_list,
                                               eval_unit, False, log_stream)))
    return SweepResult(rows, baseline_row)


def format_row(alpha, beta, report):
    return '\t'.join([str(alpha), str(beta)] + [repr(value) for value in report.acc_at.values()]
                     + [repr(report.mrr)])


def write_table(result, stream, config_echo=None):
    write_comment_header(stream, FORMAT, FORMAT_VERSION, config_echo)
    stream.write('\t'.join(['alpha', 'beta'] + ['acc@%s' % k for k in result.k_list] + ['mrr']))
    stream.write('\n')
    stream.write(format_row(BASELINE_LABEL, BASELINE_LABEL, result.baseline_row))
    stream.write('\n')
    for alpha, beta, report in result.rows:
        stream.write(format_row(alpha, beta, report))
        stream.write('\n')
