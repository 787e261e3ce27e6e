#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Configuration parser."""

import configparser
from pathlib import Path


class Config:
    """A class of objects that can read data from a configuration file."""

    def __init__(
        self,
        filename: str
    ) -> None:
        """
        Contructor of the class.

        Parameters
        ----------
        filename : str
            name of the configuration file with the values, next to this
            module

        Returns
        -------
        None

        """
        self.config = configparser.ConfigParser(
            interpolation=configparser.ExtendedInterpolation())
        self.config.read(Path(__file__).resolve().parent/filename)

    def get_tolerances(
        self
    ) -> dict[str, float]:
        """
        Return a dictionary with the tolerance of each verification check.

        Returns
        -------
        dict[str, float]
            dictionary that stores a str identifier and the tolerance of the
            corresponding check

        """
        return {
            key.upper(): float(value)
            for key, value in self.config.items("tolerances")
        }

    def get_residual_grid(
        self
    ) -> dict[str, int]:
        """Return the grid size of the heat equation check."""
        return {
            "N_X": int(self.config.get("residual_grid", "N_X")),
            "N_T": int(self.config.get("residual_grid", "N_T")),
        }

    def get_oracle(
        self
    ) -> dict[str, float | int]:
        """
        Return a dictionary with the default grid of the finite-difference
        oracle.

        Returns
        -------
        dict[str, float | int]

        """
        return {
            "NX": int(self.config.get("oracle", "NX")),
            "T_START": float(self.config.get("oracle", "T_START")),
            "T_END": float(self.config.get("oracle", "T_END")),
            "CFL": float(self.config.get("oracle", "CFL")),
            "MAX_STEPS": int(self.config.get("oracle", "MAX_STEPS")),
        }

    def get_limit(
        self
    ) -> dict[str, tuple[float, ...]]:
        """
        Return a dictionary with the default h0 ladder, as multiples of the
        threshold.

        Returns
        -------
        dict[str, tuple[float, ...]]

        """
        multipliers = self.config.get("limit", "LADDER_MULTIPLIERS")
        return {
            "LADDER_MULTIPLIERS": tuple(
                float(value) for value in multipliers.split())
        }

    def get_paths(
        self
    ) -> dict[str, str]:
        """
        Return a dictionary with the paths to folders to store files.

        Returns
        -------
        dict[str, str]
            dictionary that stores a str identifier and the paths to the
            corresponding folder

        """
        return {"OUTPUT_FOLDER": self.config.get("paths", "OUTPUT_FOLDER")}
