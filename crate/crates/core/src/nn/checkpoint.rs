//! Text checkpoint of named tensors.
//!
//! ```text
//! hgrisk-checkpoint\t1
//! config\t<key>\t<value>          (zero or more)
//! manifest\t<name>\t<rows>\t<cols> (one per tensor, in order)
//! tensor\t<name>
//! <rows lines of tab-separated values>
//! ...
//! checksum\tcrc32\t<8 hex digits over every preceding byte>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{fmt_f64, read_to_string, write_atomic};
use crate::tensor::Matrix;

const MAGIC: &str = "hgrisk-checkpoint\t1";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Checkpoint {
    pub config: Vec<(String, String)>,
    pub tensors: Vec<(String, Matrix)>,
}

impl Checkpoint {
    pub fn config_value(&self, key: &str) -> Option<&str> {
        self.config.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from(MAGIC);
        out.push('\n');
        for (k, v) in &self.config {
            let _ = writeln!(out, "config\t{k}\t{v}");
        }
        for (name, t) in &self.tensors {
            let _ = writeln!(out, "manifest\t{name}\t{}\t{}", t.rows(), t.cols());
        }
        for (name, t) in &self.tensors {
            let _ = writeln!(out, "tensor\t{name}");
            for i in 0..t.rows() {
                let row: Vec<String> = t.row(i).iter().map(|&v| fmt_f64(v)).collect();
                out.push_str(&row.join("\t"));
                out.push('\n');
            }
        }
        let sum = crc32fast::hash(out.as_bytes());
        let _ = writeln!(out, "checksum\tcrc32\t{sum:08x}");
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_text())
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::CheckpointNotFound(path.to_path_buf()));
        }
        Self::from_text(&read_to_string(path)?)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Checkpoint(msg);
        let body_end = text
            .rfind("checksum\t")
            .ok_or_else(|| bad("missing checksum line".into()))?;
        let (body, tail) = text.split_at(body_end);
        let fields: Vec<&str> = tail.trim_end().split('\t').collect();
        if fields.len() != 3 || fields[1] != "crc32" {
            return Err(bad(format!("malformed checksum line {:?}", tail.trim_end())));
        }
        let expected = u32::from_str_radix(fields[2], 16)
            .map_err(|_| bad(format!("bad checksum value {:?}", fields[2])))?;
        let actual = crc32fast::hash(body.as_bytes());
        if expected != actual {
            return Err(bad(format!("checksum mismatch: file says {expected:08x}, content is {actual:08x}")));
        }

        let mut lines = body.lines().enumerate().peekable();
        match lines.next() {
            Some((_, MAGIC)) => {}
            _ => return Err(bad("not a checkpoint file".into())),
        }
        let mut ck = Checkpoint::default();
        let mut manifest: Vec<(String, usize, usize)> = Vec::new();
        while let Some(&(no, line)) = lines.peek() {
            let cols: Vec<&str> = line.split('\t').collect();
            match cols[0] {
                "config" if cols.len() == 3 => ck.config.push((cols[1].into(), cols[2].into())),
                "manifest" if cols.len() == 4 => {
                    let dim = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("line {}: bad dimension {s:?}", no + 1)));
                    manifest.push((cols[1].into(), dim(cols[2])?, dim(cols[3])?));
                }
                "tensor" => break,
                _ => return Err(bad(format!("line {}: unexpected {line:?}", no + 1))),
            }
            lines.next();
        }
        for (name, rows, cols) in manifest {
            match lines.next() {
                Some((_, l)) if l == format!("tensor\t{name}") => {}
                other => {
                    return Err(bad(format!(
                        "expected tensor section {name:?}, found {:?}",
                        other.map(|(_, l)| l)
                    )))
                }
            }
            let mut values = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let (no, l) = lines
                    .next()
                    .ok_or_else(|| bad(format!("tensor {name:?} truncated")))?;
                let row: Vec<&str> = l.split('\t').collect();
                if row.len() != cols {
                    return Err(bad(format!("line {}: {} values, expected {cols}", no + 1, row.len())));
                }
                for v in row {
                    values.push(
                        v.parse::<f64>()
                            .map_err(|_| bad(format!("line {}: bad value {v:?}", no + 1)))?,
                    );
                }
            }
            ck.tensors.push((name, Matrix::from_vec(rows, cols, values)?));
        }
        if let Some((no, l)) = lines.next() {
            return Err(bad(format!("line {}: trailing content {l:?}", no + 1)));
        }
        Ok(ck)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        Checkpoint {
            config: vec![("pretrain.d_emb".into(), "3".into())],
            tensors: vec![
                ("a".into(), Matrix::from_fn(2, 3, |i, j| (i as f64 - j as f64) / 7.0)),
                ("b".into(), Matrix::from_vec(1, 1, vec![-0.0]).unwrap()),
            ],
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let ck = sample();
        let back = Checkpoint::from_text(&ck.to_text()).unwrap();
        assert_eq!(back, ck);
        assert_eq!(back.config_value("pretrain.d_emb"), Some("3"));
    }

    #[test]
    fn corruption_fails_checksum() {
        let text = sample().to_text().replacen("tensor\ta", "tensor\tA", 1);
        assert!(matches!(Checkpoint::from_text(&text), Err(Error::Checkpoint(m)) if m.contains("checksum")));
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = Checkpoint::load(Path::new("/nonexistent/model.ckpt")).unwrap_err();
        assert!(err.to_string().contains("checkpoint not found: /nonexistent/model.ckpt"));
    }
}
