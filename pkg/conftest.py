# Test collection wiring: the suite runs under the example host project's settings.
import os

import django


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'example.settings')
django.setup()
