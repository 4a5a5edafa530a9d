//! Build, serialize and re-verify JSON certificate documents through the
//! library API — the same path the `decide` and `verify` subcommands use.

use witt_lgp::cli::{decide_document, parse_expression, verify_document, DocParams};

fn main() {
    let params = DocParams {
        seed: 0,
        max_copies: 8,
        degree_bound: 6,
        height_bound: 10_000,
        dim_cap: 64,
    };
    for text in ["<1, t, t^2-2, -t*(t^2-2)>", "<1, -2, 3>", "symp(2)"] {
        let parsed = parse_expression(text).unwrap();
        let doc = decide_document(&parsed, &params, None).unwrap();
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        // Every emitted certificate re-verifies by independent recomputation.
        verify_document(&doc).unwrap();
        println!("--- verified ---\n");
    }
}
