"""Model checking counting MSO sentences on matroids via parse trees and tree automata."""
