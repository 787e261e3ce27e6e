#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""__init__.py file for command line application."""
