"""Spectroscopy post-processing: FFT windowing, line fitting, tracking, deviation metric."""
from .deviation import DeviationReport, argmin_parameter, deviation_D, deviation_report
from .fitting import FitModel, FitResult, GaussianDip, TrackResult, fit_composite, seed_dips, track_peaks
from .waveform import AmplitudeSpectrum, Waveform, read_waveform_csv, window_and_fft, write_waveform_csv

__all__ = ["DeviationReport", "argmin_parameter", "deviation_D", "deviation_report",
           "FitModel", "FitResult", "GaussianDip", "TrackResult", "fit_composite", "seed_dips", "track_peaks",
           "AmplitudeSpectrum", "Waveform", "read_waveform_csv", "window_and_fft", "write_waveform_csv"]
