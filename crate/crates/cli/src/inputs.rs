use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

const KNOWN_EXTENSIONS: &[&str] = &["tbx", "tei", "xml", "json"];

fn has_glob_chars(arg: &str) -> bool {
    arg.contains(['*', '?', '['])
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let mut children: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .with_context(|| format!("cannot read directory {}", dir.display()))?;
    children.sort();
    for child in children {
        if child.is_dir() {
            walk(&child, out)?;
        } else if child
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| KNOWN_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
        {
            out.push(child);
        }
    }
    Ok(())
}

/// Expands arguments into files, keeping argument order. Directories are
/// walked recursively for known extensions, patterns may match nothing.
pub fn expand(args: &[String]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for arg in args {
        let path = Path::new(arg);
        if path.is_dir() {
            walk(path, &mut files)?;
        } else if path.exists() {
            files.push(path.to_path_buf());
        } else if has_glob_chars(arg) {
            let mut matched: Vec<PathBuf> = glob::glob(arg)
                .with_context(|| format!("invalid pattern {arg:?}"))?
                .collect::<Result<_, _>>()?;
            matched.retain(|p| p.is_file());
            matched.sort();
            files.extend(matched);
        } else {
            bail!("{arg}: no such file or directory");
        }
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_directories_and_patterns_in_order() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["b.tbx", "a.xml", "notes.txt"] {
            fs::write(dir.path().join(name), "").unwrap();
        }
        fs::create_dir(dir.path().join("sub")).unwrap();
        fs::write(dir.path().join("sub/c.json"), "").unwrap();

        let root = dir.path().to_str().unwrap().to_string();
        let files = expand(std::slice::from_ref(&root)).unwrap();
        let names: Vec<_> = files
            .iter()
            .map(|p| p.strip_prefix(dir.path()).unwrap().to_owned())
            .collect();
        assert_eq!(
            names,
            vec![
                PathBuf::from("a.xml"),
                PathBuf::from("b.tbx"),
                PathBuf::from("sub/c.json")
            ]
        );

        let pattern = format!("{root}/*.tbx");
        assert_eq!(expand(&[pattern]).unwrap().len(), 1);
        let none = format!("{root}/*.tei");
        assert!(expand(&[none]).unwrap().is_empty());
        assert!(expand(&[format!("{root}/missing.tbx")]).is_err());
    }
}
