from poi_core import config
from poi_core.model import checkpoint
from poi_core.train_eval import build_model, train
from poi_core.management.base import PipelineCommand


class Command(PipelineCommand):

    help = 'Train the next-POI model on the processed-dataset bundle and write the checkpoint'

    def run(self, run_config, **options):
        processed = self.load_bundle(run_config)
        model = build_model(processed.split, processed.id_maps, run_config.get_popularity_params(),
                            run_config.get_model_options(), run_config.seed, **run_config.get_graph_options())

        with open(self.get_output_path(run_config, config.TRAIN_LOG_FILE_NAME), 'w', encoding='utf-8') as log:
            result = train(model, processed.split, run_config.get_train_config(), log, run_config.k_list,
                           run_config.eval_unit)

        with open(self.get_output_path(run_config, config.CHECKPOINT_FILE_NAME), 'w', encoding='utf-8') as stream:
            checkpoint.dump(model, stream, run_config.as_dict(), result.as_dict())
        self.stdout.write('parameters=%s best_epoch=%s final_loss=%r' % (
            model.n_parameters, result.best_epoch, result.losses[-1]))
