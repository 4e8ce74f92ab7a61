"""Tolerance profiles and the GHK_TOLERANCE_PROFILE selector."""

import numpy as np
import pytest

from ghk import CovarianceMatrix, InvalidParamsError, NonSymmetricError, active_profile
from ghk.tolerances import ENV_VAR, PROFILES


class TestProfiles:
    def test_default_values(self):
        profile = PROFILES["default"]
        assert profile.sym_atol == 1e-10
        assert profile.phys_tol == 1e-9

    def test_default_is_active_without_env(self, monkeypatch):
        monkeypatch.delenv(ENV_VAR, raising=False)
        assert active_profile().name == "default"

    def test_env_selects_strict(self, monkeypatch):
        monkeypatch.setenv(ENV_VAR, "strict")
        assert active_profile().name == "strict"
        assert active_profile().sym_atol == 1e-12

    def test_unknown_profile_rejected(self, monkeypatch):
        monkeypatch.setenv(ENV_VAR, "bogus")
        with pytest.raises(InvalidParamsError):
            active_profile()

    def test_strict_rejects_borderline_asymmetry(self, monkeypatch):
        m = 0.5 * np.eye(2)
        m[0, 1] = 5e-11  # inside the default window, outside the strict one
        monkeypatch.delenv(ENV_VAR, raising=False)
        CovarianceMatrix(m)
        monkeypatch.setenv(ENV_VAR, "strict")
        with pytest.raises(NonSymmetricError):
            CovarianceMatrix(m)


class TestCliRespectsProfile:
    def test_unknown_profile_is_an_input_error(self, monkeypatch, capsys):
        from ghk.cli import main

        monkeypatch.setenv(ENV_VAR, "bogus")
        code = main(["report", "--std-form", "1.5,0.7,0,0"])
        assert code == 2

    def test_profile_echoed_in_report(self, monkeypatch, capsys):
        import json

        from ghk.cli import main

        monkeypatch.setenv(ENV_VAR, "strict")
        assert main(["report", "--std-form", "1.5,0.7,0,0"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["tolerance_profile"] == "strict"
