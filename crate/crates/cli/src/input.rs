use std::fs;
use std::io::Read;
use std::path::Path;

use clap::ValueEnum;
use clonex::io::{
    bipartite_to_context, graph_to_context, nominal_scale_table, read_cxt, read_edge_list,
    EdgeListMode, ParsedGraph,
};
use clonex::FormalContext;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// `.cxt` if the input starts with a `B` header line, else a bipartite edge list
    Auto,
    Cxt,
    /// Two-mode edge list: first column objects, second column attributes
    Edges,
    /// One-mode edge list: nodes become both objects and attributes
    Onemode,
    /// Categorical table, nominally scaled
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct InputArgs {
    /// Input file, or `-` for standard input
    #[arg(default_value = "-")]
    pub input: String,

    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,

    /// Field delimiter for edge lists (default: any whitespace)
    #[arg(long)]
    pub delimiter: Option<char>,

    /// CSV column holding object names; it is not scaled
    #[arg(long)]
    pub id_column: Option<String>,

    /// Keep self-loops of one-mode graphs on the diagonal
    #[arg(long)]
    pub loops: bool,
}

impl InputArgs {
    /// Name used in reports: the file stem, or `stdin`.
    pub fn dataset_name(&self) -> String {
        if self.input == "-" {
            return "stdin".to_string();
        }
        Path::new(&self.input)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.input.clone())
    }

    pub fn read_text(&self) -> Result<String, Failure> {
        if self.input == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::io(format!("reading standard input: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(&self.input).map_err(|e| Failure::io(format!("{}: {e}", self.input)))
        }
    }

    pub fn load(&self) -> Result<FormalContext, Failure> {
        let text = self.read_text()?;
        let format = match self.input_format {
            InputFormat::Auto => sniff(&text),
            f => f,
        };
        let ctx = match format {
            InputFormat::Cxt | InputFormat::Auto => read_cxt(&text)?,
            InputFormat::Edges => match read_edge_list(&text, EdgeListMode::Bipartite, self.delimiter)? {
                ParsedGraph::Bipartite(g) => bipartite_to_context(&g)?,
                ParsedGraph::OneMode(_) => unreachable!(),
            },
            InputFormat::Onemode => match read_edge_list(&text, EdgeListMode::OneMode, self.delimiter)? {
                ParsedGraph::OneMode(g) => graph_to_context(&g, self.loops)?,
                ParsedGraph::Bipartite(_) => unreachable!(),
            },
            InputFormat::Csv => nominal_scale_table(text.as_bytes(), self.id_column.as_deref())?,
        };
        Ok(ctx)
    }
}

/// `.cxt` when the first line is exactly `B` and the second is blank.
fn sniff(text: &str) -> InputFormat {
    let text = text.trim_start_matches('\u{feff}');
    let mut lines = text.lines().map(|l| l.trim_end());
    match (lines.next(), lines.next()) {
        (Some("B"), Some("")) => InputFormat::Cxt,
        _ => InputFormat::Edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sniffing() {
        assert_eq!(sniff("B\n\n1\n1\n\ng\nm\nX\n"), InputFormat::Cxt);
        assert_eq!(sniff("B\tx\n"), InputFormat::Edges);
        assert_eq!(sniff("Bob Hiking\n"), InputFormat::Edges);
        assert_eq!(sniff(""), InputFormat::Edges);
    }
}
