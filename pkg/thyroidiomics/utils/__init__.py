"""
Shared utilities for thyroidiomics
"""
