//! Start the HTTP service on port 8787 with default limits.

use std::net::SocketAddr;

use mfrac::api::{serve, ServerConfig, DEFAULT_PORT};

#[tokio::main]
async fn main() -> mfrac::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], DEFAULT_PORT));
    println!("try: curl -s -X POST http://{addr}/api/simulate -d '{{\"hurst\":0.3,\"points\":9}}'");
    serve(addr, ServerConfig::default()).await
}
