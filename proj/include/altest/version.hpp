// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace altest {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace altest
