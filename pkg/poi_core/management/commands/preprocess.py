import logging
import os

from django.utils.translation import gettext_lazy as _

from poi_core import config
from poi_core.exceptions import ConfigurationError, DataError, MissingArtifact
from poi_core.ingest import preprocess
from poi_core.ingest import bundle
from poi_core.management.base import PipelineCommand


logger = logging.getLogger('poi-core')


def format_statistics(statistics):
    return ' '.join('%s=%s' % (key, value) for key, value in statistics.items())


class Command(PipelineCommand):

    help = 'Parse, filter, segment and split a raw check-in file into the processed-dataset bundle'

    def run(self, run_config, **options):
        path = run_config.dataset_path
        if not path:
            raise ConfigurationError(_('dataset_path (--dataset) is required.'))
        if not os.path.isfile(path):
            raise MissingArtifact(path)

        with open(path, encoding='utf-8') as source:
            try:
                processed = preprocess(
                    source,
                    layout=run_config.layout,
                    min_user_checkins=run_config.min_user_checkins,
                    min_poi_checkins=run_config.min_poi_checkins,
                    window=run_config.window_hours,
                    fractions=run_config.get_fractions(),
                    exclusion=run_config.split_exclusion,
                )
            except UnicodeDecodeError as ex:
                raise DataError(_('%(path)s is not UTF-8 encoded: %(error)s') % {'path': path, 'error': ex}) from ex
            except DataError:
                logger.error('Preprocessing of %s failed', path)
                raise

        with open(self.get_output_path(run_config, config.BUNDLE_FILE_NAME), 'w', encoding='utf-8') as stream:
            bundle.dump(processed, stream, run_config.as_dict())
        self.stdout.write(format_statistics(processed.statistics))
