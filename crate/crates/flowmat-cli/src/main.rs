//! Command-line surface of the flow-lattice pipeline.
//!
//! Exit codes: 0 success, 1 invalid input, 2 not a flow lattice,
//! 3 verification mismatch.

use flowmat_core::formats::{
    parse_gram, parse_graph, parse_stbasis_input, write_gram, write_matroid, StbasisInput,
};
use flowmat_core::graph::{
    fundamental_basis, graphic_matroid, spanning_tree_count, strong_orientation_count,
    strong_orientation_count_par, two_cut_blocks, validate_two_connected, GraphError,
};
use flowmat_core::lattice::{strict_voronoi_vectors, strict_voronoi_vectors_par, GramMatrix};
use flowmat_core::matroid::{expand, is_isomorphic};
use flowmat_core::reconstruct::{block_incidence, reconstruct_with, spanning_tree_basis};
use flowmat_core::voronoi::{build_cell, VoronoiCell, VoronoiError};
use num_traits::ToPrimitive;
use std::process::ExitCode;

const USAGE: &str = "\
usage: flowmat <command> <input-file> [--parallel] [--mesh]

commands:
  reconstruct <gram-file>   reconstruct the graphic matroid from a Gram matrix
  gram <graph-file>         Gram matrix of the fundamental circuit basis of a graph
  oracle <graph-file>       graph-side ground truth: blocks, circuits, counts
  verify <graph-file>       round-trip check against the directly computed matroid
  voronoi <gram-file>       Voronoi cell statistics; --mesh adds an OBJ dump (rank 3)
  stbasis <file>            greedy spanning-tree basis from a Gram or incidence file

flags:
  --parallel                run the coset and orientation scans in parallel
  --mesh                    with `voronoi`, dump the rank-3 cell as OBJ
  --stats                   with `voronoi`, print the statistics line (default)

exit codes: 0 success, 1 invalid input, 2 not a flow lattice, 3 mismatch
";

struct Options {
    parallel: bool,
    mesh: bool,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    ExitCode::from(run(&args))
}

fn run(args: &[String]) -> u8 {
    let mut command = None;
    let mut input = None;
    let mut options = Options {
        parallel: false,
        mesh: false,
    };
    for arg in args {
        match arg.as_str() {
            "--parallel" => options.parallel = true,
            "--mesh" => options.mesh = true,
            "--stats" => {} // statistics are printed by default
            "-h" | "--help" => {
                print!("{USAGE}");
                return 0;
            }
            flag if flag.starts_with('-') => {
                eprintln!("unknown flag {flag}\n{USAGE}");
                return 1;
            }
            positional if command.is_none() => command = Some(positional.to_string()),
            positional if input.is_none() => input = Some(positional.to_string()),
            positional => {
                eprintln!("unexpected argument {positional}\n{USAGE}");
                return 1;
            }
        }
    }
    let (Some(command), Some(path)) = (command, input) else {
        eprintln!("{USAGE}");
        return 1;
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {path}: {e}");
            return 1;
        }
    };
    match command.as_str() {
        "reconstruct" => cmd_reconstruct(&text, &options),
        "gram" => cmd_gram(&text),
        "oracle" => cmd_oracle(&text, &options),
        "verify" => cmd_verify(&text, &options),
        "voronoi" => cmd_voronoi(&text, &options),
        "stbasis" => cmd_stbasis(&text, &options),
        other => {
            eprintln!("unknown command {other}\n{USAGE}");
            1
        }
    }
}

fn cmd_reconstruct(text: &str, options: &Options) -> u8 {
    let gram = match parse_gram(text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("invalid Gram matrix: {e}");
            return 1;
        }
    };
    match reconstruct_with(&gram, options.parallel) {
        Ok(matroid) => {
            print!("{}", write_matroid(&matroid));
            0
        }
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}

fn cmd_gram(text: &str) -> u8 {
    let graph = match parse_graph(text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("invalid graph: {e}");
            return 1;
        }
    };
    if let Err(e) = validate_two_connected(&graph) {
        eprintln!("graph is not 2-edge-connected: {e}");
        return 1;
    }
    let basis = fundamental_basis(&graph);
    print!("{}", write_gram(&basis.gram));
    0
}

fn cmd_oracle(text: &str, options: &Options) -> u8 {
    let graph = match parse_graph(text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("invalid graph: {e}");
            return 1;
        }
    };
    if let Err(e) = validate_two_connected(&graph) {
        eprintln!("graph is not 2-edge-connected: {e}");
        return 1;
    }
    println!(
        "vertices={} edges={} genus={}",
        graph.n_vertices(),
        graph.n_edges(),
        graph.genus()
    );
    let blocks = two_cut_blocks(&graph);
    let sizes: Vec<String> = blocks.sizes().iter().map(usize::to_string).collect();
    println!("two_cut_blocks={}: {}", blocks.len(), sizes.join(" "));
    println!("circuits={}", graphic_matroid(&graph).circuits().len());
    let strong = if options.parallel {
        strong_orientation_count_par(&graph)
    } else {
        strong_orientation_count(&graph)
    };
    match strong {
        Ok(count) => println!("strong_orientations={count}"),
        Err(GraphError::TooLarge) => println!("strong_orientations=unavailable"),
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    }
    println!("spanning_trees={}", spanning_tree_count(&graph));
    0
}

fn cmd_verify(text: &str, options: &Options) -> u8 {
    let graph = match parse_graph(text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("invalid graph: {e}");
            return 1;
        }
    };
    if let Err(e) = validate_two_connected(&graph) {
        eprintln!("graph is not 2-edge-connected: {e}");
        return 1;
    }
    let basis = fundamental_basis(&graph);
    let reconstructed = match reconstruct_with(&basis.gram, options.parallel) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("pipeline failed on an oracle Gram matrix: {e}");
            println!("MISMATCH");
            return 3;
        }
    };
    let oracle = graphic_matroid(&graph);
    match is_isomorphic(&expand(&reconstructed), &oracle) {
        Ok(true) => {
            println!("OK");
            0
        }
        Ok(false) => {
            println!("MISMATCH");
            3
        }
        Err(e) => {
            eprintln!("isomorphism check impossible: {e}");
            1
        }
    }
}

fn build_cell_or_report(gram: &GramMatrix, options: &Options) -> Result<VoronoiCell, u8> {
    let circuits = if options.parallel {
        strict_voronoi_vectors_par(gram)
    } else {
        strict_voronoi_vectors(gram)
    };
    build_cell(gram, &circuits).map_err(|e| match e {
        VoronoiError::DegenerateRank => {
            eprintln!("{e}");
            1
        }
        VoronoiError::Unbounded => {
            eprintln!("{e}");
            2
        }
    })
}

fn cmd_voronoi(text: &str, options: &Options) -> u8 {
    let gram = match parse_gram(text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("invalid Gram matrix: {e}");
            return 1;
        }
    };
    let cell = match build_cell_or_report(&gram, options) {
        Ok(c) => c,
        Err(code) => return code,
    };
    println!("{}", cell.stats_line());
    if options.mesh {
        if gram.rank() != 3 {
            eprintln!("mesh dump requires a rank-3 lattice");
            return 1;
        }
        print!("{}", obj_mesh(&cell));
    }
    0
}

/// OBJ-style dump of a rank-3 cell: vertex positions in lattice coordinates
/// and one polygon per facet. For external viewing only; the pipeline itself
/// never leaves exact arithmetic.
fn obj_mesh(cell: &VoronoiCell) -> String {
    let mut out = String::new();
    for v in cell.vertices() {
        let coords: Vec<String> = v
            .point
            .iter()
            .map(|c| {
                let x = c.numer().to_f64().unwrap_or(f64::NAN)
                    / c.denom().to_f64().unwrap_or(f64::NAN);
                format!("{x}")
            })
            .collect();
        out.push_str(&format!("v {}\n", coords.join(" ")));
    }
    for f in 0..cell.halfspaces().len() {
        let cycle = cell.facet_vertex_cycle(f);
        let ids: Vec<String> = cycle.iter().map(|&i| (i + 1).to_string()).collect();
        out.push_str(&format!("f {}\n", ids.join(" ")));
    }
    out
}

fn cmd_stbasis(text: &str, options: &Options) -> u8 {
    let incidence = match parse_stbasis_input(text) {
        Ok(StbasisInput::Incidence(m)) => m,
        Ok(StbasisInput::Gram(gram)) => {
            if gram.rank() == 1 {
                // a single circuit containing the single block
                vec![vec![true]]
            } else {
                match build_cell_or_report(&gram, options) {
                    Ok(cell) => block_incidence(&cell),
                    Err(code) => return code,
                }
            }
        }
        Err(e) => {
            eprintln!("invalid input: {e}");
            return 1;
        }
    };
    let (basis, marked) = spanning_tree_basis(&incidence);
    let marked: Vec<String> = marked.iter().map(|c| (c + 1).to_string()).collect();
    let basis: Vec<String> = basis.iter().map(|r| (r + 1).to_string()).collect();
    println!("marked {}", marked.join(" "));
    println!("basis {}", basis.join(" "));
    0
}
