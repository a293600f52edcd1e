"""pytest wiring: configure Django the same way app/manage.py does."""
import os
import sys
from pathlib import Path

APP_DIR = Path(__file__).resolve().parent / 'app'
if str(APP_DIR) not in sys.path:
    sys.path.insert(0, str(APP_DIR))

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'esia.settings')

import django  # noqa: E402

django.setup()
