// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace rgdtomo {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kLibraryName = "rgdtomo";

}  // namespace rgdtomo
