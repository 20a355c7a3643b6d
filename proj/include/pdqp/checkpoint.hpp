#pragma once

#include <string>

#include "pdqp/net.hpp"

namespace pdqp {

/// Versioned binary parameter checkpoint:
///
///   magic "PDQPCKPT" | u32 version | config block (layers, width, mlp_hidden,
///   mlp_depth as u64, squash flag as u8) | u64 tensor count | per-tensor
///   directory (name, blob offset, flat length) | flat little-endian f64
///   blob in for_each_tensor order.
///
/// Identical parameters serialize to identical bytes.
std::string checkpoint_bytes(const NetParams& params);
void save_checkpoint(const NetParams& params, const std::string& path);

NetParams checkpoint_from_bytes(const std::string& bytes);
NetParams load_checkpoint(const std::string& path);

}  // namespace pdqp
