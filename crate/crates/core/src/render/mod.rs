//! Human-readable renderings of evaluated diagrams.
//!
//! All renderers are pure functions of the hypergraph: node ids follow box
//! and wire indices, so equal inputs give byte-identical output.

mod dot;
mod svg;
mod text;

use std::fmt;
use std::str::FromStr;

use crate::diagram::OpenHypergraph;
use crate::narrative::Actant;

pub use dot::render_dot;
pub use svg::render_svg;
pub use text::render_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Dot,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankDir {
    #[default]
    LeftToRight,
    TopToBottom,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Format::Dot),
            "svg" => Ok(Format::Svg),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (dot, svg, text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Dot => "dot",
            Format::Svg => "svg",
            Format::Text => "text",
        })
    }
}

impl FromStr for RankDir {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "LR" | "lr" | "left-to-right" => Ok(RankDir::LeftToRight),
            "TB" | "tb" | "top-to-bottom" => Ok(RankDir::TopToBottom),
            other => Err(format!("unknown rank direction `{other}` (LR, TB)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RenderOptions {
    pub format: Format,
    /// Label wires with role subscripts, not just the entity.
    pub show_roles: bool,
    pub rank_dir: RankDir,
    /// `cap`/`cup` instead of `∩`/`∪`.
    pub ascii: bool,
}

pub fn render_diagram(h: &OpenHypergraph, opts: &RenderOptions) -> String {
    match opts.format {
        Format::Dot => render_dot(h, opts),
        Format::Svg => render_svg(h, opts),
        Format::Text => render_text(h, opts),
    }
}

/// Where a wire touches the picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum End {
    Input(usize),
    /// Box index, port index.
    BoxOut(usize, usize),
    BoxIn(usize, usize),
    Output(usize),
}

impl End {
    pub(crate) fn is_source(self) -> bool {
        matches!(self, End::Input(_) | End::BoxOut(..))
    }
}

/// Every end of every wire, in a fixed order: sources first, then sinks.
pub(crate) fn wire_ends(h: &OpenHypergraph) -> Vec<Vec<End>> {
    let mut ends = vec![Vec::new(); h.wires.len()];
    for (i, &w) in h.inputs.iter().enumerate() {
        ends[w].push(End::Input(i));
    }
    for (b, bx) in h.boxes.iter().enumerate() {
        for (k, &w) in bx.outputs.iter().enumerate() {
            ends[w].push(End::BoxOut(b, k));
        }
        for (k, &w) in bx.inputs.iter().enumerate() {
            ends[w].push(End::BoxIn(b, k));
        }
    }
    for (i, &w) in h.outputs.iter().enumerate() {
        ends[w].push(End::Output(i));
    }
    for e in &mut ends {
        e.sort();
    }
    ends
}

pub(crate) fn wire_label(a: &Actant, show_roles: bool) -> String {
    if show_roles {
        format!("{}_{}", a.entity, a.role.abbreviation())
    } else {
        a.entity.to_string()
    }
}

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}
