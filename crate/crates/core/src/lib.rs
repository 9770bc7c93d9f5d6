//! Dirichlet eigenvalues and eigenfunctions of geodesic balls and annuli in
//! rank-one symmetric spaces, and numerical verification of the inequalities
//! behind the Payne-Polya-Weinberger comparison `lambda_2(Omega) <= lambda_2(B_1)`.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod gap;
pub mod hyper;
pub mod inequalities;
pub mod ode;
pub mod oracle;
pub mod plot;
pub mod quad;
pub mod quotient;
pub mod radial;
pub mod rearrangement;
pub mod report;
pub mod roots;
pub mod series;
pub mod space;
pub mod suite;

pub use error::{Error, Result};
pub use radial::{frobenius_seed, shoot, shoot_interval, OdeMode, RadialProfile, Shot};
pub use space::{
    ball_volume, mean_curvature, radius_for_volume, sphere_lambda1, sphere_lambda1_derivative, volume_density,
    Curvature, SpaceSpec,
};
pub use eigen::{
    annulus_spectrum, ball_spectrum, lambda02_ball, lambda1_ball, lambda2_ball, radius_for_lambda1, AnnulusSpectrum,
    BallSpectrum, EigenSolver, Lambda2Source,
};
