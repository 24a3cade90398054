"""
Pydantic schemas for run configuration and JSON reports.
"""
