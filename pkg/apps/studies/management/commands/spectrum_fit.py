"""
Management command: fit the low-frequency Ohmicity of a spectral density.

Usage:
    python manage.py spectrum_fit --config runs/spectrum_fit.cfg --out output/spectrum_fit
    python manage.py spectrum_fit --set source=bec --set dimension=1
"""
from apps.studies.commands import StudyCommand
from apps.studies.config import Subcommand


class Command(StudyCommand):
    help = 'Fit the low-frequency Ohmicity of a spectral density'
    subcommand = Subcommand.SPECTRUM_FIT
