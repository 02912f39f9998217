"""
Commands module for thyroidiomics CLI
"""
