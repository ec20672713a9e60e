"""Log Fitting ideals, blowup chart trees and normal forms for morphisms."""
