#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Numerical library: special functions, similarity solutions, oracle."""
