"""obslab: desk-scale experiments on log-gauge contents and heat observability."""
