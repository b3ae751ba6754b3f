"""
Celery task running a study on a worker.

Usage:
    from apps.studies.tasks import run_study
    run_study.delay('bec-scan', {'dimension': '3'}, 'output/bec', seed=0, threads=4)
"""
import logging
from typing import Dict, Optional

from celery import shared_task

from apps.studies.config import RunConfig
from apps.studies.runners import run

logger = logging.getLogger(__name__)


@shared_task
def run_study(subcommand: str, raw: Dict[str, str], output_dir: str,
              seed: Optional[int] = None, threads: Optional[int] = None):
    """
    Rebuild the run configuration from its textual values and run it.

    Returns:
        Summary with the written file paths.
    """
    config = RunConfig.from_mapping(subcommand, raw, output_dir, seed, threads)
    try:
        paths = run(config)
    except Exception:
        logger.exception('Study %s failed', subcommand)
        raise
    return {
        'subcommand': config.subcommand.value,
        'files': [str(path) for path in paths],
        'status': 'completed',
    }
