from poi_core import config
from poi_core.flowmap import build_flow_map, export_edge_list
from poi_core.popularity import popularity_table, write_report
from poi_core.utils import write_comment_header
from poi_core.management.base import PipelineCommand


FORMAT = 'poi-core-popularity'
EDGES_FORMAT = 'poi-core-flowmap-edges'
FORMAT_VERSION = 1


class Command(PipelineCommand):

    help = 'Write the recency-aware popularity table of the train split'

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--edges', action='store_true', help='also export the flow-map edge list')

    def run(self, run_config, **options):
        processed = self.load_bundle(run_config)
        split, id_maps = processed.split, processed.id_maps
        table = popularity_table(split.train, id_maps, run_config.get_popularity_params())

        with open(self.get_output_path(run_config, config.POPULARITY_FILE_NAME), 'w', encoding='utf-8') as stream:
            write_comment_header(stream, FORMAT, FORMAT_VERSION, run_config.as_dict())
            write_report(table, id_maps, stream)

        if options.get('edges'):
            flow_map = build_flow_map(split.train, id_maps, table)
            with open(self.get_output_path(run_config, config.EDGES_FILE_NAME), 'w', encoding='utf-8') as stream:
                write_comment_header(stream, EDGES_FORMAT, FORMAT_VERSION, run_config.as_dict())
                export_edge_list(flow_map, id_maps, stream)

        self.stdout.write('pois=%s alpha=%s beta=%s' % (len(table.scores), run_config.alpha, run_config.beta))
