//! Cartesian, tensor and strong products. Vertex `(g, h)` is `g * |H| + h`.

use super::{Graph, GraphError};

pub const MAX_PRODUCT_ORDER: usize = 1_000_000;

#[derive(Clone, Copy)]
enum Kind {
    Cartesian,
    Tensor,
    Strong,
}

fn product(g: &Graph, h: &Graph, kind: Kind) -> Result<Graph, GraphError> {
    let (ng, nh) = (g.order(), h.order());
    if ng == 0 || nh == 0 {
        return Err(GraphError::InvalidParams("product factors must be non-empty".into()));
    }
    let order = ng
        .checked_mul(nh)
        .filter(|&n| n <= MAX_PRODUCT_ORDER)
        .ok_or_else(|| {
            GraphError::TooLarge(format!("product of {ng} x {nh} vertices exceeds {MAX_PRODUCT_ORDER}"))
        })?;
    let id = |a: usize, b: usize| a * nh + b;
    let mut edges = Vec::new();
    let (cartesian, tensor) = match kind {
        Kind::Cartesian => (true, false),
        Kind::Tensor => (false, true),
        Kind::Strong => (true, true),
    };
    for a in 0..ng {
        for b in 0..nh {
            if cartesian {
                edges.extend(h.neighbors(b).iter().map(|&b2| (id(a, b), id(a, b2))));
                edges.extend(g.neighbors(a).iter().map(|&a2| (id(a, b), id(a2, b))));
            }
            if tensor {
                for &a2 in g.neighbors(a) {
                    edges.extend(h.neighbors(b).iter().map(|&b2| (id(a, b), id(a2, b2))));
                }
            }
        }
    }
    Ok(Graph::from_valid_edges(order, edges))
}

/// `(g,h) ~ (g',h')` iff one coordinate is equal and the other adjacent.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    product(g, h, Kind::Cartesian)
}

/// `(g,h) ~ (g',h')` iff both coordinates are adjacent.
pub fn tensor_product(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    product(g, h, Kind::Tensor)
}

/// Union of the Cartesian and tensor products.
pub fn strong_product(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    product(g, h, Kind::Strong)
}
