"""
Celery application for queued studies.

Workers pick up `apps.studies.tasks.run_study`; broker and result backend
come from REDIS_URL in settings.
"""
import os
from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'qprobe.settings')

app = Celery('qprobe')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks()
