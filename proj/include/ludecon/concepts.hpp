// concepts.hpp - the static catalog of game concepts and the concept-vector
// value container.
//
// Every concept has a stable id, a category, a data type and a computation
// type (detected from the description at compile time, or measured from
// playouts). Ids are stable across versions so persisted corpus files remain
// comparable; append new concepts, never renumber.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ludecon {

enum class ConceptCategory { Properties, Equipment, Rules, Math, Metrics, Visual, Implementation };
enum class ConceptDataType { Binary, NumericalInt, NumericalFloat };
enum class ConceptComputation { Compilation, Playout };

// Stable concept ids. Grouped with gaps so future additions keep ids stable.
enum class Concept : int {
    // Properties
    NumPlayers = 1,
    TwoPlayer = 2,
    Multiplayer = 3,
    Stochastic = 4,
    Deterministic = 5,
    AlternatingTurns = 6,
    // Equipment
    SquareTiling = 20,
    HexTiling = 21,
    TrackBoard = 22,
    SquareShape = 23,
    HexagonShape = 24,
    RhombusShape = 25,
    NeutralPiece = 26,
    DiceUsed = 27,
    NumDice = 28,
    NumPlayableSites = 29,
    NumComponentTypes = 30,
    NumDirections = 31,
    // Rules / start
    PiecesPlacedOnBoard = 40,
    NumStartPieces = 41,
    // Rules / play
    AddMove = 50,
    SlideMove = 51,
    ShootMove = 52,
    HopMove = 53,
    StepMove = 54,
    RollMove = 55,
    RemoveEffect = 56,
    MoveAgain = 57,
    Capture = 58,
    HopCapture = 59,
    ReplacementCapture = 60,
    Sow = 61,
    Promotion = 62,
    NoRepetition = 63,
    // Rules / end
    LineEnd = 70,
    ConnectionEnd = 71,
    LoopEnd = 72,
    NoMovesEnd = 73,
    ReachEnd = 74,
    CheckmateEnd = 75,
    DrawPossible = 76,
    // Math
    Logic = 80,
    Parity = 81,
    Counting = 82,
    Arithmetic = 83,
    // Metrics (playout)
    GameLength = 90,
    BranchingFactor = 91,
    Balance = 92,
    Drawishness = 93,
    // Frequencies of move-type concepts (playout)
    FreqAddMove = 100,
    FreqSlideMove = 101,
    FreqShootMove = 102,
    FreqHopMove = 103,
    FreqStepMove = 104,
    FreqRollMove = 105,
    FreqRemoveEffect = 106,
    FreqCapture = 107,
    FreqMoveAgain = 108,
    // Frequencies of end-type concepts (playout)
    FreqLineEnd = 110,
    FreqConnectionEnd = 111,
    FreqLoopEnd = 112,
    FreqNoMovesEnd = 113,
    FreqReachEnd = 114,
};

struct ConceptDef {
    Concept id;
    std::string name;
    ConceptCategory category;
    ConceptDataType dataType;
    ConceptComputation computation;
    std::string description;
};

struct RegistryError : std::runtime_error {
    explicit RegistryError(const std::string& m) : std::runtime_error(m) {}
};

// The full fixed catalog, ordered by id.
inline const std::vector<ConceptDef>& registry() {
    using C = Concept;
    using Cat = ConceptCategory;
    using Dt = ConceptDataType;
    using Cp = ConceptComputation;
    static const std::vector<ConceptDef> defs = {
        {C::NumPlayers, "Num Players", Cat::Properties, Dt::NumericalInt, Cp::Compilation,
         "Number of players"},
        {C::TwoPlayer, "Two Player", Cat::Properties, Dt::Binary, Cp::Compilation,
         "Exactly two players"},
        {C::Multiplayer, "Multiplayer", Cat::Properties, Dt::Binary, Cp::Compilation,
         "More than two players"},
        {C::Stochastic, "Stochastic", Cat::Properties, Dt::Binary, Cp::Compilation,
         "Chance elements such as dice or random values"},
        {C::Deterministic, "Deterministic", Cat::Properties, Dt::Binary, Cp::Compilation,
         "No chance elements"},
        {C::AlternatingTurns, "Alternating Turns", Cat::Properties, Dt::Binary, Cp::Compilation,
         "Players move one at a time"},

        {C::SquareTiling, "Square Tiling", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "Board cells tile as a square grid"},
        {C::HexTiling, "Hex Tiling", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "Board cells tile as hexagons"},
        {C::TrackBoard, "Track Board", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "Board is a closed track of sites"},
        {C::SquareShape, "Square Shape", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "Board outline is a square"},
        {C::HexagonShape, "Hexagon Shape", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "Board outline is a hexagon"},
        {C::RhombusShape, "Rhombus Shape", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "Board outline is a rhombus"},
        {C::NeutralPiece, "Neutral Piece", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "A piece owned by no player"},
        {C::DiceUsed, "Dice Used", Cat::Equipment, Dt::Binary, Cp::Compilation,
         "Dice are part of the equipment"},
        {C::NumDice, "Num Dice", Cat::Equipment, Dt::NumericalInt, Cp::Compilation,
         "Number of dice"},
        {C::NumPlayableSites, "Num Playable Sites", Cat::Equipment, Dt::NumericalInt,
         Cp::Compilation, "Number of playable board sites"},
        {C::NumComponentTypes, "Num Component Types", Cat::Equipment, Dt::NumericalInt,
         Cp::Compilation, "Number of distinct component types"},
        {C::NumDirections, "Num Directions", Cat::Equipment, Dt::NumericalFloat,
         Cp::Compilation, "Average number of possible directions per site"},

        {C::PiecesPlacedOnBoard, "Pieces Placed On Board", Cat::Rules, Dt::Binary,
         Cp::Compilation, "Initial position places pieces on the board"},
        {C::NumStartPieces, "Num Start Pieces", Cat::Rules, Dt::NumericalInt, Cp::Compilation,
         "Number of pieces placed at the start"},

        {C::AddMove, "Add Move", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Pieces are added to the board"},
        {C::SlideMove, "Slide Move", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Pieces slide along free rays"},
        {C::ShootMove, "Shoot Move", Cat::Rules, Dt::Binary, Cp::Compilation,
         "A piece is shot along a free ray"},
        {C::HopMove, "Hop Move", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Pieces jump over an occupied site"},
        {C::StepMove, "Step Move", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Pieces move to an adjacent site"},
        {C::RollMove, "Roll Move", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Moves are driven by a dice roll"},
        {C::RemoveEffect, "Remove Effect", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Pieces can be removed from the board"},
        {C::MoveAgain, "Move Again", Cat::Rules, Dt::Binary, Cp::Compilation,
         "A player can move several times in a turn"},
        {C::Capture, "Capture", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Some move captures pieces"},
        {C::HopCapture, "Hop Capture", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Hopped-over pieces are captured"},
        {C::ReplacementCapture, "Replacement Capture", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Moving onto an enemy piece captures it"},
        {C::Sow, "Sow", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Pieces are sown around a track"},
        {C::Promotion, "Promotion", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Pieces can promote to another type"},
        {C::NoRepetition, "No Repetition", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Repeating an earlier position is forbidden"},

        {C::LineEnd, "Line End", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Game ends with a line of pieces"},
        {C::ConnectionEnd, "Connection End", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Game ends by connecting regions"},
        {C::LoopEnd, "Loop End", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Game ends with a loop of pieces"},
        {C::NoMovesEnd, "No Moves End", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Game ends when a player has no moves"},
        {C::ReachEnd, "Reach End", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Game ends when a piece reaches a region"},
        {C::CheckmateEnd, "Checkmate End", Cat::Rules, Dt::Binary, Cp::Compilation,
         "Game ends by checkmate"},
        {C::DrawPossible, "Draw Possible", Cat::Rules, Dt::Binary, Cp::Compilation,
         "The game can end in a draw"},

        {C::Logic, "Logic", Cat::Math, Dt::Binary, Cp::Compilation,
         "Logical connectives in the rules"},
        {C::Parity, "Parity", Cat::Math, Dt::Binary, Cp::Compilation,
         "Even/odd tests in the rules"},
        {C::Counting, "Counting", Cat::Math, Dt::Binary, Cp::Compilation,
         "Counting in the rules"},
        {C::Arithmetic, "Arithmetic", Cat::Math, Dt::Binary, Cp::Compilation,
         "Arithmetic in the rules"},

        {C::GameLength, "Game Length", Cat::Metrics, Dt::NumericalFloat, Cp::Playout,
         "Mean number of moves per trial"},
        {C::BranchingFactor, "Branching Factor", Cat::Metrics, Dt::NumericalFloat, Cp::Playout,
         "Mean number of legal moves per decision point"},
        {C::Balance, "Balance", Cat::Metrics, Dt::NumericalFloat, Cp::Playout,
         "First-player win fraction minus the mean win fraction"},
        {C::Drawishness, "Drawishness", Cat::Metrics, Dt::NumericalFloat, Cp::Playout,
         "Fraction of drawn trials"},

        {C::FreqAddMove, "Frequency:Add Move", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of add moves"},
        {C::FreqSlideMove, "Frequency:Slide Move", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of slide moves"},
        {C::FreqShootMove, "Frequency:Shoot Move", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of shoot moves"},
        {C::FreqHopMove, "Frequency:Hop Move", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of hop moves"},
        {C::FreqStepMove, "Frequency:Step Move", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of step moves"},
        {C::FreqRollMove, "Frequency:Roll Move", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of roll moves"},
        {C::FreqRemoveEffect, "Frequency:Remove Effect", Cat::Rules, Dt::NumericalFloat,
         Cp::Playout, "Mean per-trial fraction of removing moves"},
        {C::FreqCapture, "Frequency:Capture", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of capturing moves"},
        {C::FreqMoveAgain, "Frequency:Move Again", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Mean per-trial fraction of move-again moves"},
        {C::FreqLineEnd, "Frequency:Line End", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Fraction of trials won with a line"},
        {C::FreqConnectionEnd, "Frequency:Connection End", Cat::Rules, Dt::NumericalFloat,
         Cp::Playout, "Fraction of trials won by connection"},
        {C::FreqLoopEnd, "Frequency:Loop End", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Fraction of trials won with a loop"},
        {C::FreqNoMovesEnd, "Frequency:No Moves End", Cat::Rules, Dt::NumericalFloat,
         Cp::Playout, "Fraction of trials ending with no moves"},
        {C::FreqReachEnd, "Frequency:Reach End", Cat::Rules, Dt::NumericalFloat, Cp::Playout,
         "Fraction of trials won by reaching a region"},
    };
    return defs;
}

inline const ConceptDef* find_concept(Concept id) {
    static const std::map<Concept, const ConceptDef*> index = [] {
        std::map<Concept, const ConceptDef*> m;
        for (const auto& d : registry()) m[d.id] = &d;
        return m;
    }();
    auto it = index.find(id);
    return it == index.end() ? nullptr : it->second;
}

inline const ConceptDef* find_concept(const std::string& name) {
    static const std::map<std::string, const ConceptDef*> index = [] {
        std::map<std::string, const ConceptDef*> m;
        for (const auto& d : registry()) m[d.name] = &d;
        return m;
    }();
    auto it = index.find(name);
    return it == index.end() ? nullptr : it->second;
}

inline const ConceptDef& concept_def(Concept id) {
    const ConceptDef* d = find_concept(id);
    if (!d) throw RegistryError("unknown concept id " + std::to_string(static_cast<int>(id)));
    return *d;
}

// Playout-frequency concept paired with a binary move-type or end-type
// concept. Throws RegistryError("NoFrequencyPair") for anything else.
inline Concept frequency_concept_of(Concept base) {
    switch (base) {
        case Concept::AddMove: return Concept::FreqAddMove;
        case Concept::SlideMove: return Concept::FreqSlideMove;
        case Concept::ShootMove: return Concept::FreqShootMove;
        case Concept::HopMove: return Concept::FreqHopMove;
        case Concept::StepMove: return Concept::FreqStepMove;
        case Concept::RollMove: return Concept::FreqRollMove;
        case Concept::RemoveEffect: return Concept::FreqRemoveEffect;
        case Concept::Capture: return Concept::FreqCapture;
        case Concept::MoveAgain: return Concept::FreqMoveAgain;
        case Concept::LineEnd: return Concept::FreqLineEnd;
        case Concept::ConnectionEnd: return Concept::FreqConnectionEnd;
        case Concept::LoopEnd: return Concept::FreqLoopEnd;
        case Concept::NoMovesEnd: return Concept::FreqNoMovesEnd;
        case Concept::ReachEnd: return Concept::FreqReachEnd;
        default:
            throw RegistryError("NoFrequencyPair: " + concept_def(base).name);
    }
}

// Base binary concept of a frequency concept, if any.
inline std::optional<Concept> base_concept_of(Concept freq) {
    for (const auto& d : registry()) {
        if (d.computation != ConceptComputation::Compilation) continue;
        if (d.dataType != ConceptDataType::Binary) continue;
        Concept candidate = d.id;
        switch (candidate) {
            case Concept::AddMove: case Concept::SlideMove: case Concept::ShootMove:
            case Concept::HopMove: case Concept::StepMove: case Concept::RollMove:
            case Concept::RemoveEffect: case Concept::Capture: case Concept::MoveAgain:
            case Concept::LineEnd: case Concept::ConnectionEnd: case Concept::LoopEnd:
            case Concept::NoMovesEnd: case Concept::ReachEnd:
                if (frequency_concept_of(candidate) == freq) return candidate;
                break;
            default: break;
        }
    }
    return std::nullopt;
}

// Optional reference to how playout values were produced.
struct PlayoutProvenance {
    int trials = 0;
    std::uint64_t seed = 0;
    std::string policy;  // "random" or "first"
};

// Sparse map concept id -> value. Binary concepts are stored only when set
// (value 1); numerical concepts hold their computed value.
struct ConceptVector {
    std::map<Concept, double> values;
    std::optional<PlayoutProvenance> provenance;

    void set(Concept id, double value) {
        if (!find_concept(id))
            throw RegistryError("unknown concept id " +
                                std::to_string(static_cast<int>(id)));
        const ConceptDef& def = concept_def(id);
        if (def.dataType == ConceptDataType::Binary && value != 0.0 && value != 1.0)
            throw RegistryError("binary concept " + def.name + " must be 0 or 1");
        if (def.name.rfind("Frequency:", 0) == 0 && (value < 0.0 || value > 1.0))
            throw RegistryError("frequency concept " + def.name + " must be in [0,1]");
        values[id] = value;
    }
    void set_flag(Concept id) { set(id, 1.0); }

    double get(Concept id) const {
        auto it = values.find(id);
        return it == values.end() ? 0.0 : it->second;
    }
    bool has(Concept id) const { return values.count(id) != 0; }
    bool flag(Concept id) const { return get(id) == 1.0; }
    std::size_t size() const { return values.size(); }
};

// Disjoint union of a compilation vector and a playout vector.
inline ConceptVector merge(const ConceptVector& compilation, const ConceptVector& playout) {
    ConceptVector out = compilation;
    for (const auto& [id, value] : playout.values) {
        if (out.values.count(id))
            throw RegistryError("OverlappingDomains: " + concept_def(id).name);
        out.values[id] = value;
    }
    if (playout.provenance) out.provenance = playout.provenance;
    return out;
}

inline std::string to_string(ConceptCategory c) {
    switch (c) {
        case ConceptCategory::Properties: return "Properties";
        case ConceptCategory::Equipment: return "Equipment";
        case ConceptCategory::Rules: return "Rules";
        case ConceptCategory::Math: return "Math";
        case ConceptCategory::Metrics: return "Metrics";
        case ConceptCategory::Visual: return "Visual";
        case ConceptCategory::Implementation: return "Implementation";
    }
    return "?";
}

inline std::string to_string(ConceptDataType t) {
    switch (t) {
        case ConceptDataType::Binary: return "Binary";
        case ConceptDataType::NumericalInt: return "NumericalInt";
        case ConceptDataType::NumericalFloat: return "NumericalFloat";
    }
    return "?";
}

inline std::string to_string(ConceptComputation c) {
    return c == ConceptComputation::Compilation ? "Compilation" : "Playout";
}

}  // namespace ludecon
