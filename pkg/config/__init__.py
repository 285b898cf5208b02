"""
Configuration module for cgolab.
"""

from config.settings import LabSettings, FeatureFlags

__all__ = ['LabSettings', 'FeatureFlags']
