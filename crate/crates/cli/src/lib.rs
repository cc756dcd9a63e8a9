// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line and HTTP front ends for `rectpeg-core`.

pub mod job;
pub mod server;
