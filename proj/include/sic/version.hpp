#pragma once

namespace sic {

inline constexpr const char* kToolName = "sicsim";
inline constexpr const char* kToolVersion = "1.0.0";
// Output-format revisions; bumped on any change to CSV columns, snapshot
// layout, or manifest keys.
inline constexpr int kSnapshotFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;

} // namespace sic
