from lgorbifold.app import cli

cli(prog_name="lgorbifold")
