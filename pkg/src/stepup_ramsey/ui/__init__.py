"""User interfaces for stepup_ramsey project.
"""
