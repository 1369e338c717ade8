from poi_core import config
from poi_core.train_eval.sweep import sweep, write_table
from poi_core.management.base import PipelineCommand


class Command(PipelineCommand):

    help = 'Train and test one model per (alpha, beta) grid cell plus the check-in frequency baseline'

    def run(self, run_config, **options):
        processed = self.load_bundle(run_config)
        log_path = self.get_output_path(run_config, config.SWEEP_LOG_FILE_NAME)
        with open(log_path, 'w', encoding='utf-8') as log:
            result = sweep(
                processed.split, processed.id_maps,
                alpha_grid=run_config.alpha_grid,
                beta_grid=run_config.beta_grid,
                cfg=run_config.get_train_config(),
                model_options=run_config.get_model_options(),
                recency_window=run_config.recency_window_days,
                graph_options=run_config.get_graph_options(),
                k_list=run_config.k_list,
                eval_unit=run_config.eval_unit,
                log_stream=log,
            )

        with open(self.get_output_path(run_config, config.SWEEP_FILE_NAME), 'w', encoding='utf-8') as stream:
            write_table(result, stream, run_config.as_dict())
        self.stdout.write('rows=%s' % len(result))
