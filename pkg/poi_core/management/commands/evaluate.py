from poi_core import config
from poi_core.exceptions import MissingArtifact
from poi_core.forms import RunConfig
from poi_core.model import checkpoint
from poi_core.model.inputs import build_graph_inputs
from poi_core.train_eval import evaluate
from poi_core.utils import dumps
from poi_core.management.base import PipelineCommand


FORMAT = 'poi-core-metrics'
FORMAT_VERSION = 1


class Command(PipelineCommand):

    help = 'Compute Acc@k and MRR of the trained checkpoint on the test split'

    def run(self, run_config, **options):
        processed = self.load_bundle(run_config)
        path = self.get_path(run_config, config.CHECKPOINT_FILE_NAME)
        try:
            stream = open(path, encoding='utf-8')
        except FileNotFoundError:
            raise MissingArtifact(path)
        with stream:
            data = checkpoint.read(stream)

        # graph inputs are rebuilt with the popularity settings the checkpoint was trained with
        trained = RunConfig(data['config']) if data['config'] else run_config
        graph = build_graph_inputs(processed.split, processed.id_maps, trained.get_popularity_params(),
                                   **trained.get_graph_options())
        model = checkpoint.build_model(data, graph)
        report = evaluate(model, processed.split.test, run_config.k_list, run_config.eval_unit, trained.alpha,
                          trained.beta)

        with open(self.get_output_path(run_config, config.METRICS_FILE_NAME), 'w', encoding='utf-8') as output:
            output.write(dumps({
                'format': FORMAT,
                'format_version': FORMAT_VERSION,
                'config': run_config.as_dict(),
                'metrics': report.as_dict(),
            }))
        self.stdout.write(' '.join(['acc@%s=%.4f' % (k, value) for k, value in report.acc_at.items()]
                                   + ['mrr=%.4f' % report.mrr, 'samples=%s' % report.n_samples]))
