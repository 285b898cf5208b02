"""
Experiment runner and run reports.
"""

from src.runner.experiment_runner import CheckResult, ExperimentRunner, RunReport, latest_run_id

__all__ = ['CheckResult', 'ExperimentRunner', 'RunReport', 'latest_run_id']
