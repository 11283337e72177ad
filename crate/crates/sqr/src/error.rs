use std::fmt;

use sqr_core::fock::FockError;
use sqr_core::ring::RingError;
use sqr_core::wavepacket::WavePacketError;
use sqr_core::wigner::WignerError;

/// Process exit status for each failure class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Usage = 1,
    Parse = 2,
    Semantic = 3,
    Numeric = 4,
    Verify = 5,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Self {
            exit,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Exit::Usage, message)
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self::new(Exit::Numeric, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::InvalidParameter(_) | FockError::DimTooSmall(_) => Self::usage(e.to_string()),
            _ => Self::numeric(e.to_string()),
        }
    }
}

impl From<WavePacketError> for CliError {
    fn from(e: WavePacketError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<WignerError> for CliError {
    fn from(e: WignerError) -> Self {
        match e {
            WignerError::Fock(f) => f.into(),
            WignerError::Grid(_) => Self::usage(e.to_string()),
            WignerError::Normalization { .. } => Self::numeric(e.to_string()),
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::Invalid(ref d) => Self::new(
                Exit::Semantic,
                d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n"),
            ),
            RingError::Sweep(_) | RingError::Pump(_) | RingError::Wavelength(_) => Self::usage(e.to_string()),
            RingError::Fock(f) => f.into(),
            RingError::Sfg(_) => Self::numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }
}
