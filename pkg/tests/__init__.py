"""
Test package for the project.
""" 