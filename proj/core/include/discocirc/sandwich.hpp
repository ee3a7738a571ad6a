#pragma once

#include <string>
#include <vector>

#include "discocirc/compose.hpp"

namespace discocirc {

enum class SandwichMode { shared, foliated };

struct SandwichConfig {
  SandwichMode mode = SandwichMode::shared;
};

/// Wire routing of a frame.  Wires are token indices of noun leaves.
struct FrameIO {
  std::vector<int> inputs;
  std::vector<int> outputs;
  std::vector<std::vector<int>> component_wires;
};

/// Follows the frame's compound type factor by factor: each child contributes
/// the nouns of its subtree, left arguments first.  Component wires come from
/// the same frame conversion as tree_to_frame.
FrameIO frame_io_wires(const PregroupTreeNode& node, const NounTagger& is_noun = default_noun_tagger());

/// Box names used for the unitaries around component `index` (0-based).
std::string sandwich_name(const std::string& frame, bool top, int index, SandwichMode mode);

/// Frame-free layer sequence for one element acting on `width` wires.
/// Frames become BOT, swaps, component, inverse swaps, TOP for each
/// component in order; inner frames are expanded first.
std::vector<DiagramElement> expand_element(const DiagramElement& e, const SandwichConfig& cfg);

/// Expands every frame of the text diagram.  Each resulting box layer is a
/// par of the box and an identity on the wires it leaves alone.
TextDiagram expand_frames(const TextDiagram& d, const SandwichConfig& cfg = {});

}  // namespace discocirc
