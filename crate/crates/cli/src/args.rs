use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "centrefall",
    version,
    about = "Moment dynamics of a quantum particle in an attractive inverse-square potential",
    long_about = "Moment dynamics of a quantum particle in an attractive inverse-square potential.\n\n\
        Quantities are SI unless --natural is given (hbar = m = 1). Tolerances can be \
        overridden with CENTREFALL_PRECISION, e.g. \"zero=1e-12,deviation=1e-2,leakage=1e-6\"."
)]
pub struct Cli {
    /// key=value file whose entries are applied as --key value before the command-line flags
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample <r^2>(t) from initial moments
    Evolve(EvolveArgs),
    /// Classify the long-time behaviour of <r^2>(t)
    Fate(FateArgs),
    /// Falling time of a state with <rp+pr> = 0 and negative energy
    FallTime(FallTimeArgs),
    /// Moments of a trial state psi_s or of a sampled radial profile
    Trial(TrialArgs),
    /// Critical couplings and the zero-energy trial exponent
    Critical(CriticalArgs),
    /// Crank-Nicolson propagation checked against the quadratic moment law
    Propagate(PropagateArgs),
    /// Falling time of atoms around a charged wire in a grounded cylinder
    Wire(WireArgs),
    /// Critical voltage after rescaling wire and chamber radii
    Scale(ScaleArgs),
    /// Normalized curves y(tau) = 1 + eps*tau + sign(H)*tau^2
    Figure1(Figure1Args),
    /// Physical constants, built-in atoms and chamber presets
    Constants(ConstantsArgs),
}

#[derive(Debug, Args)]
pub struct UnitArgs {
    /// Use natural units (hbar = m = 1) instead of SI
    #[arg(long)]
    pub natural: bool,

    /// Particle mass [kg; dimensionless with --natural, default 1]
    #[arg(long, value_name = "KG")]
    pub mass: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Initial <r^2> [m^2]
    #[arg(long = "r2-0", value_name = "M2", allow_hyphen_values = true)]
    pub r2_0: f64,

    /// Initial <rp+pr> [kg m^2/s]
    #[arg(long, default_value_t = 0.0, value_name = "KG_M2_PER_S", allow_hyphen_values = true)]
    pub d0: f64,

    /// Mean energy <H> [J]
    #[arg(long, value_name = "J", allow_hyphen_values = true)]
    pub energy: f64,

    #[command(flatten)]
    pub units: UnitArgs,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub state: StateArgs,

    /// End of the sampled interval [s]; defaults to twice the falling time or the curve's time scale
    #[arg(long = "t-max", value_name = "S")]
    pub t_max: Option<f64>,

    /// Number of samples, endpoints included
    #[arg(long, default_value_t = 200)]
    pub samples: usize,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FateArgs {
    #[command(flatten)]
    pub state: StateArgs,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FallTimeArgs {
    /// Initial <r^2> [m^2]
    #[arg(long = "r2-0", value_name = "M2", allow_hyphen_values = true)]
    pub r2_0: f64,

    /// Mean energy <H> [J], must be negative
    #[arg(long, value_name = "J", allow_hyphen_values = true)]
    pub energy: f64,

    #[command(flatten)]
    pub units: UnitArgs,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TrialShape {
    /// Trial exponent s (> 0); psi_s ~ r^s exp(-beta r^2 / 2)
    #[arg(long, value_name = "S")]
    pub s: Option<f64>,

    /// Width parameter beta [1/m^2]
    #[arg(long, value_name = "PER_M2")]
    pub beta: Option<f64>,

    /// Angular momentum quantum number l_z
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub lz: i32,

    /// Radial profile file with columns r [m], Re R, optional Im R (replaces --s/--beta)
    #[arg(long, value_name = "FILE")]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrialArgs {
    #[command(flatten)]
    pub shape: TrialShape,

    /// Coupling gamma [J m^2]
    #[arg(long, default_value_t = 0.0, value_name = "J_M2")]
    pub gamma: f64,

    #[command(flatten)]
    pub units: UnitArgs,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub units: UnitArgs,

    /// Trial exponent s for a state-specific critical coupling
    #[arg(long, value_name = "S")]
    pub s: Option<f64>,

    /// Width parameter beta [1/m^2] (default 1)
    #[arg(long, value_name = "PER_M2")]
    pub beta: Option<f64>,

    /// Angular momentum quantum number l_z
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub lz: i32,

    /// Coupling [J m^2] for which to report the zero-energy exponent 2m*gamma/hbar^2
    #[arg(long, value_name = "J_M2")]
    pub gamma: Option<f64>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    #[command(flatten)]
    pub shape: TrialShape,

    /// Couplings [J m^2]; several values run as an ordered sweep
    #[arg(long, value_delimiter = ',', required = true, value_name = "J_M2", allow_hyphen_values = true)]
    pub gamma: Vec<f64>,

    /// Initial phase chirp k in exp(i k r^2) [1/m^2]
    #[arg(long, default_value_t = 0.0, value_name = "PER_M2", allow_hyphen_values = true)]
    pub chirp: f64,

    #[command(flatten)]
    pub units: UnitArgs,

    /// Grid points
    #[arg(long, default_value_t = centrefall::tdse::DEFAULT_POINTS)]
    pub points: usize,

    /// Outer radius of the grid [m]; default 12/sqrt(beta)
    #[arg(long = "r-max", value_name = "M")]
    pub r_max: Option<f64>,

    /// Time step [s]; default 2e-4 m/(hbar beta)
    #[arg(long, value_name = "S")]
    pub dt: Option<f64>,

    /// Propagation time [s]; default 2 m/(hbar beta)
    #[arg(long = "t-max", value_name = "S")]
    pub t_max: Option<f64>,

    /// Steps between recorded observables
    #[arg(long = "record-every", default_value_t = centrefall::tdse::DEFAULT_RECORD_EVERY)]
    pub record_every: usize,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ChamberArgs {
    /// Named chamber geometry
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// Wire radius [m]
    #[arg(long, value_name = "M")]
    pub r1: Option<f64>,

    /// Outer cylinder radius [m]
    #[arg(long, value_name = "M")]
    pub r2: Option<f64>,

    /// Chamber length [m]
    #[arg(long, value_name = "M")]
    pub length: Option<f64>,

    /// Extra atom records: key=value lines with name, mass_u [u], alpha_A3 [Angstrom^3]
    #[arg(long, value_name = "FILE")]
    pub particles: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// r1 = 0.7 um, r2 = 4.2 mm, length = 0.1 m
    Dus,
}

#[derive(Debug, Args)]
pub struct WireArgs {
    /// Atom name (built-in Li7, H1, He3, or from --particles)
    #[arg(long, default_value = "Li7")]
    pub atom: String,

    #[command(flatten)]
    pub chamber: ChamberArgs,

    /// Wire voltage [V]
    #[arg(long, value_name = "V", conflicts_with = "charge", required_unless_present = "charge")]
    pub voltage: Option<f64>,

    /// Wire line charge [pC/m]
    #[arg(long, value_name = "PC_PER_M")]
    pub charge: Option<f64>,

    /// Trial exponent s of the atomic cloud
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    #[command(flatten)]
    pub chamber: ChamberArgs,

    /// Wire radius scale factor lambda1
    #[arg(long, default_value_t = 1.0)]
    pub lambda1: f64,

    /// Chamber radius scale factor lambda2
    #[arg(long)]
    pub lambda2: f64,

    /// Atoms to tabulate, comma separated (e.g. Li7,H1,He3)
    #[arg(long, value_delimiter = ',')]
    pub atoms: Vec<String>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    /// eps values for the H < 0 and H > 0 families
    #[arg(long, value_delimiter = ',', default_values_t = [-2.0, -1.0, 0.0, 1.0], allow_hyphen_values = true)]
    pub eps: Vec<f64>,

    /// Samples per curve, endpoints included
    #[arg(long, default_value_t = 201)]
    pub samples: usize,

    /// Largest dimensionless time tau
    #[arg(long = "tau-max", default_value_t = 3.0)]
    pub tau_max: f64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// Extra atom records: key=value lines with name, mass_u [u], alpha_A3 [Angstrom^3]
    #[arg(long, value_name = "FILE")]
    pub particles: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}
