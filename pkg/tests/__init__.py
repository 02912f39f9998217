"""
Tests module for Pipeline Creator CLI
"""