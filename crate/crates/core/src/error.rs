use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("no SCG data in {}; run `scg-cli generate -l java <workspace>` first", .0.display())]
    MissingData(PathBuf),

    #[error("{}: malformed record at byte {offset}: {message}", path.display())]
    Malformed { path: PathBuf, offset: u64, message: String },

    #[error("cannot serialize node `{id}`: {reason}")]
    Serialization { id: String, reason: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unsupported language `{0}` (supported languages: java)")]
    UnsupportedLanguage(String),

    #[error("invalid partition request: {0}")]
    Partition(String),

    #[error("export failed: {0}")]
    Export(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) trait IoContext<T> {
    fn at(self, path: impl Into<PathBuf>) -> Result<T>;
}

impl<T> IoContext<T> for io::Result<T> {
    fn at(self, path: impl Into<PathBuf>) -> Result<T> {
        self.map_err(|source| Error::Io { path: path.into(), source })
    }
}
