"""
Core numerical utilities.
"""
