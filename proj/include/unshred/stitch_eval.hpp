#pragma once

#include "unshred/assembler.hpp"
#include "unshred/raster.hpp"
#include "unshred/shredder.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace unshred {

enum class DocClass { Handwritten, Typeset, Image };

inline constexpr DocClass kAllDocClasses[] = {DocClass::Handwritten, DocClass::Typeset, DocClass::Image};

std::string_view doc_class_name(DocClass c);
std::optional<DocClass> parse_doc_class(std::string_view name);

// Horizontal concatenation in chain order; flipped members are rotated first.
BinaryRaster stitch(const Chain& chain, const std::map<StripId, BinaryRaster>& strips);

// Fraction of ground-truth neighbour pairs (consecutive among the strips
// present in `rec`) that sit next to each other in some chain with matching
// orientation. A chain read fully reversed still counts. 1.0 when there is
// nothing to recover.
double adjacency_accuracy(const Reconstruction& rec, const GroundTruth& gt);

// Strip-weighted mean over chains of the share of members from the chain's
// majority page. 1.0 when there are no chains.
double page_purity(const Reconstruction& rec, const GroundTruth& gt);

// Chains that are exactly one page's surviving strips in correct order.
int pages_perfect(const Reconstruction& rec, const GroundTruth& gt);

struct EvalReport {
    double adjacency_accuracy = 0.0;
    double page_purity = 0.0;
    int pages_perfect = 0;
    int strips_total = 0;
    int strips_unplaced = 0;
    DocClass doc_class = DocClass::Typeset;
};

EvalReport evaluate(const Reconstruction& rec, const GroundTruth& gt, DocClass doc_class);

// Deterministic synthetic pages:
//  typeset      wide glyph blocks hanging from straight cap lines; bottoms run
//               at 45 degrees, so each text line carries more ink near its top
//  handwritten  the same lines with a drifting baseline and irregular glyph
//               widths and spacing
//  image        full-width bands: a solid bar with a toothed lower edge made
//               of flat runs joined by 45 degree slopes. Slopes stay clear of
//               columns that are multiples of 16, so any seam on that grid
//               only ever sees straight edges.
BinaryRaster generate_corpus(DocClass doc_class, int width, int height, std::uint64_t seed);

}  // namespace unshred
