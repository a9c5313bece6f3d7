"""Wavelet decompositions driving a recurrent forecaster.

Filter-bank and lifting wavelet transforms, an online-trained recurrent
network, and a pipeline that forecasts solar irradiance from wavelet
coefficients of weather channels.
"""

__version__ = "0.1.0"

from .errors import (DataError, DivergenceError, UsageError,   # noqa: F401
                     WavecastError)
from .filters import (CoefficientPyramid, FAMILIES,            # noqa: F401
                      FilterBank, approximation_band, dwt, export_pyramid,
                      filter_bank, idwt, load_pyramid, threshold_bands)
from .lifting import (LiftingPyramid, LiftingStage,            # noqa: F401
                      fit_predictor, interpolating_predictor,
                      lifting_forward, lifting_inverse,
                      predictor_design_matrix)
from .metrics import (EvalResult, correlation, evaluate,       # noqa: F401
                      mse_trace_export, relative_rms)
from .pipeline import (InputVectorSet, TrainReport,            # noqa: F401
                       WrnnTopology, assemble_wrnn, build_vectors,
                       forecast, load_checkpoint, prepare_vectors,
                       run_single, run_table1_sweep, save_checkpoint,
                       select_scales, train_early_stopping)
from .rnn import (RnnConfig, RnnState, forward, init_state,    # noqa: F401
                  logistic, rbf_wavelet, reset_episode, rtrl_step,
                  train_series, train_span)
from .series import (ScaleParams, TimeSeries, load_csv,        # noqa: F401
                     normalize, resample, synth_meteo, write_csv)
