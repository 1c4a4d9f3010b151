"""
Module: src/cleverprune/application/use_cases/__init__.py

One use case per CLI command.
"""
