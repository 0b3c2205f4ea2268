//! One module per subcommand, plus the plumbing they share.

pub mod curate;
pub mod genbench;
pub mod lint;
pub mod report;
pub mod run;
pub mod score;
pub mod stats;

use std::path::Path;

use codeplan_client::{AnyTransport, FixtureTransport, HttpTransport, ServerConfig};

use crate::error::CliError;

/// Live HTTP transport, or fixture replies when `--mock-server` names a
/// directory. The fixture path never touches the network or the API key.
pub(crate) fn make_transport(
    mock: Option<&Path>,
    server: &ServerConfig,
) -> Result<AnyTransport, CliError> {
    match mock {
        Some(dir) => Ok(AnyTransport::Fixture(FixtureTransport::new(dir)?)),
        None => Ok(AnyTransport::Http(HttpTransport::new(server.clone())?)),
    }
}

pub(crate) fn runtime() -> Result<tokio::runtime::Runtime, CliError> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Data(format!("cannot start async runtime: {e}")))
}

/// Creates the directories an output path needs.
pub(crate) fn ensure_parent(path: &Path) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
    }
    Ok(())
}

/// `<file>.<tag>.jsonl` beside the main output, for rejected and failed
/// record streams.
pub(crate) fn sibling_path(output: &Path, tag: &str) -> std::path::PathBuf {
    let stem = output.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    output.with_file_name(format!("{stem}.{tag}.jsonl"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_paths_keep_the_directory_and_swap_the_suffix() {
        assert_eq!(
            sibling_path(Path::new("data/triples.jsonl"), "rejected"),
            Path::new("data/triples.rejected.jsonl")
        );
        assert_eq!(
            sibling_path(Path::new("out"), "failures"),
            Path::new("out.failures.jsonl")
        );
    }

    #[test]
    fn fixture_transport_requires_an_existing_directory() {
        let server = ServerConfig::new("http://unused", "m");
        match make_transport(Some(Path::new("/no/such/dir")), &server) {
            Err(err) => assert_eq!(err.exit_code(), 1),
            Ok(_) => panic!("a missing fixture directory must be rejected"),
        }
    }
}
