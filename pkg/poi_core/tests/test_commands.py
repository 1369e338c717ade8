import io
import json
import os
import shutil
import tempfile

from unittest import mock

from django.core.management.base import CommandError
from django.test import SimpleTestCase

from poi_core.exceptions import DivergenceDetected
from poi_core.forms import load_run_config
from poi_core.ingest.exceptions import TooManyMalformedLines
from poi_core.management import call_command, execute_from_command_line
from poi_core.management.commands.preprocess import Command as PreprocessCommand


FIXTURE_PATH = os.path.join(os.path.dirname(__file__), 'data', 'checkins.tsv')

SMALL_RUN = {
    'user_dim': 4,
    'timecat_dim': 4,
    'heads': 2,
    'layers': 1,
    'ffn_dim': 8,
    'gcn_hidden': [8],
    'epochs': 2,
    'batch_size': 8,
    'learning_rate': 0.01,
    'k_list': [1, 5],
    'alpha_grid': [0.33, 0.67],
    'beta_grid': [0.5, 0.67],
}


class PipelineCommandTestCase(SimpleTestCase):

    def setUp(self):
        self.output_dir = tempfile.mkdtemp()
        self.config_path = self.write_config(SMALL_RUN)

    def tearDown(self):
        shutil.rmtree(self.output_dir)

    def write_config(self, data, name='run.json'):
        path = os.path.join(self.output_dir, name)
        with open(path, 'w') as config_file:
            json.dump(data, config_file)
        return path

    def get_path(self, file_name):
        return os.path.join(self.output_dir, file_name)

    def read(self, file_name):
        with open(self.get_path(file_name), encoding='utf-8') as stream:
            return stream.read()

    def call(self, name, *args, **options):
        options.setdefault('out', self.output_dir)
        options.setdefault('config', self.config_path)
        stdout = io.StringIO()
        call_command(name, *args, stdout=stdout, **options)
        return stdout.getvalue().strip()

    def assert_returncode(self, returncode, name, *args, **options):
        with self.assertLogs('poi-core', level='ERROR'):
            with self.assertRaises(CommandError) as context:
                self.call(name, *args, **options)
        self.assertEqual(context.exception.returncode, returncode)

    def preprocess(self):
        return self.call('preprocess', dataset=FIXTURE_PATH)


class PreprocessCommandTestCase(PipelineCommandTestCase):

    def test_fixture_should_print_dataset_statistics(self):
        self.assertEqual(self.preprocess(), 'users=5 pois=8 categories=3 checkins=185 trajectories=44')
        bundle = json.loads(self.read('dataset.json'))
        self.assertEqual(bundle['format'], 'poi-core-dataset')
        self.assertEqual(bundle['config']['dataset_path'], FIXTURE_PATH)

    def test_missing_dataset_should_exit_with_data_error(self):
        self.assert_returncode(2, 'preprocess', dataset=self.get_path('missing.tsv'))

    def test_dataset_path_should_be_required(self):
        self.assert_returncode(1, 'preprocess')

    def test_unknown_configuration_key_should_exit_with_configuration_error(self):
        self.assert_returncode(1, 'preprocess', dataset=FIXTURE_PATH,
                               config=self.write_config({'learning_rat': 0.1}, 'typo.json'))

    def test_invalid_configuration_value_should_exit_with_configuration_error(self):
        self.assert_returncode(1, 'preprocess', dataset=FIXTURE_PATH, alpha=1.5)

    def test_too_many_malformed_lines_should_exit_with_data_error(self):
        path = self.get_path('broken.tsv')
        with open(path, 'w', encoding='utf-8') as stream:
            stream.write('not\ta\tcheck-in\n' * 10)
        self.assert_returncode(2, 'preprocess', dataset=path)

    def test_malformed_file_should_keep_ingest_error(self):
        path = self.get_path('broken.tsv')
        with open(path, 'w', encoding='utf-8') as stream:
            stream.write('not\ta\tcheck-in\n' * 10)
        run_config = load_run_config(overrides={'dataset_path': path, 'output_dir': self.output_dir})
        with self.assertLogs('poi-core', level='ERROR') as logs:
            with self.assertRaises(TooManyMalformedLines) as context:
                PreprocessCommand().run(run_config)
        self.assertEqual((len(context.exception.errors), context.exception.total), (10, 10))
        self.assertIn(path, logs.output[-1])

    def test_malformed_flags_should_exit_with_configuration_error(self):
        self.assert_returncode(1, 'preprocess', '--alpha', 'x', dataset=FIXTURE_PATH)
        self.assert_returncode(1, 'train', '--epochs', 'foo')
        self.assert_returncode(1, 'preprocess', '--unknown-flag', dataset=FIXTURE_PATH)

    def test_malformed_flag_on_command_line_should_exit_with_configuration_error(self):
        with mock.patch('sys.stderr', new_callable=io.StringIO) as stderr:
            with self.assertRaises(SystemExit) as context:
                execute_from_command_line(['manage.py', 'train', '--epochs', 'foo', '--out', self.output_dir])
        self.assertEqual(context.exception.code, 1)
        self.assertIn('--epochs', stderr.getvalue())


class ModelCommandsTestCase(PipelineCommandTestCase):

    def test_train_and_evaluate(self):
        self.preprocess()
        output = self.call('train', seed=7)
        self.assertTrue(output.startswith('parameters='))
        self.assertIn('best_epoch=', output)

        log = [json.loads(line) for line in self.read('train_log.jsonl').splitlines()]
        self.assertEqual([record['epoch'] for record in log], [1, 2])
        checkpoint = json.loads(self.read('checkpoint.json'))
        self.assertEqual(checkpoint['format'], 'poi-core-checkpoint')
        self.assertEqual(checkpoint['config']['seed'], 7)
        self.assertEqual(len(checkpoint['training']['trace']), 2)

        output = self.call('evaluate')
        self.assertTrue(output.startswith('acc@1='))
        metrics = json.loads(self.read('metrics.json'))
        self.assertEqual(metrics['format'], 'poi-core-metrics')
        self.assertEqual(sorted(metrics['metrics']['acc_at'].keys()), ['1', '5'])
        self.assertLessEqual(metrics['metrics']['acc_at']['1'], metrics['metrics']['acc_at']['5'])
        self.assertTrue(0.0 < metrics['metrics']['mrr'] <= 1.0)

    def test_training_twice_should_write_identical_checkpoints(self):
        self.preprocess()
        self.call('train')
        first = self.read('checkpoint.json')
        self.call('train')
        self.assertEqual(self.read('checkpoint.json'), first)

    def test_train_without_bundle_should_exit_with_data_error(self):
        self.assert_returncode(2, 'train')

    def test_evaluate_without_checkpoint_should_exit_with_data_error(self):
        self.preprocess()
        self.assert_returncode(2, 'evaluate')

    def test_divergence_should_exit_with_own_code(self):
        self.preprocess()
        with mock.patch('poi_core.management.commands.train.train', side_effect=DivergenceDetected(1, float('nan'))):
            self.assert_returncode(3, 'train')


class ReportCommandsTestCase(PipelineCommandTestCase):

    def test_popularity_report_should_write_table_and_edges(self):
        self.preprocess()
        self.assertEqual(self.call('popularity_report', edges=True, alpha=0.33, beta=0.67),
                         'pois=8 alpha=0.33 beta=0.67')
        lines = self.read('popularity.tsv').splitlines()
        self.assertEqual(lines[0], '# format: poi-core-popularity')
        rows = [line for line in lines if not line.startswith('#')]
        self.assertEqual(rows[0].split('\t')[0], 'poi_raw_id')
        self.assertEqual(len(rows), 1 + 8)
        edges = [line for line in self.read('flowmap_edges.tsv').splitlines() if not line.startswith('#')]
        self.assertTrue(edges)
        self.assertTrue(all(len(edge.split('\t')) == 3 for edge in edges))

    def test_popularity_report_should_accept_hyphenated_name(self):
        self.preprocess()
        self.assertEqual(self.call('popularity-report', alpha=0.5, beta=0.5), 'pois=8 alpha=0.5 beta=0.5')
        self.assertTrue(os.path.exists(self.get_path('popularity.tsv')))

    def test_command_line_should_accept_hyphenated_name(self):
        self.preprocess()
        with mock.patch('sys.stdout', new_callable=io.StringIO) as stdout:
            execute_from_command_line(['manage.py', 'popularity-report', '--out', self.output_dir,
                                       '--config', self.config_path, '--alpha', '0.33', '--beta', '0.67'])
        self.assertEqual(stdout.getvalue().strip(), 'pois=8 alpha=0.33 beta=0.67')
        self.assertTrue(os.path.exists(self.get_path('popularity.tsv')))

    def test_popularity_report_without_edges_flag_should_skip_edge_list(self):
        self.preprocess()
        self.call('popularity_report')
        self.assertFalse(os.path.exists(self.get_path('flowmap_edges.tsv')))

    def test_sweep_should_write_baseline_and_grid_rows(self):
        self.preprocess()
        self.assertEqual(self.call('sweep', epochs=1), 'rows=5')
        rows = [line for line in self.read('sweep.tsv').splitlines() if not line.startswith('#')]
        self.assertEqual(rows[0], 'alpha\tbeta\tacc@1\tacc@5\tmrr')
        self.assertEqual([tuple(row.split('\t')[:2]) for row in rows[1:]],
                         [('baseline', 'baseline'), ('0.33', '0.5'), ('0.33', '0.67'), ('0.67', '0.5'),
                          ('0.67', '0.67')])
        self.assertEqual(len(self.read('sweep_log.jsonl').splitlines()), 5)
